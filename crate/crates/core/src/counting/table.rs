//! Restricted partition counts `p_{≤k}(m)` and `q_{≤k}(m)`.

use std::io::Write;

use super::store::{CellStore, LimbArena, WideStore};
use crate::error::{Error, Result};

/// Environment variable overriding [`MemoryBudget::default`], in MiB.
pub const MEMORY_ENV: &str = "UNIMODAL_MEMORY_MB";

const DEFAULT_MEMORY_MB: usize = 1024;

/// Upper bound on the estimated footprint of a single table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemoryBudget {
    pub bytes: usize,
}

impl MemoryBudget {
    pub fn from_mb(mb: usize) -> Self {
        Self { bytes: mb << 20 }
    }

    /// The default, or the value of `UNIMODAL_MEMORY_MB` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(MEMORY_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map(Self::from_mb)
                .map_err(|_| Error::validation(format!("{MEMORY_ENV}={v} is not an integer"))),
            Err(_) => Ok(Self::default()),
        }
    }
}

impl Default for MemoryBudget {
    fn default() -> Self {
        Self::from_mb(DEFAULT_MEMORY_MB)
    }
}

/// Which restricted count a table holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableKind {
    /// `p_{≤k}(m)`: partitions of `m` into parts at most `k`.
    BoundedPartition,
    /// `q_{≤k}(m)`: partitions of `m` into distinct parts at most `k`.
    BoundedDistinct,
}

impl TableKind {
    pub fn name(self) -> &'static str {
        match self {
            TableKind::BoundedPartition => "p_le",
            TableKind::BoundedDistinct => "q_le",
        }
    }

    /// Upper bound on `log2` of the largest entry for sizes up to `n`.
    fn max_bits(self, n: usize) -> f64 {
        let n = n as f64;
        let c = match self {
            TableKind::BoundedPartition => (2.0 / 3.0f64).sqrt(),
            TableKind::BoundedDistinct => (1.0 / 3.0f64).sqrt(),
        };
        std::f64::consts::PI * c * n.sqrt() / std::f64::consts::LN_2 + 1.0
    }
}

/// Lower-triangular table over `0 ≤ m ≤ max_n`, `0 ≤ k ≤ min(m, max_k)`.
///
/// Entries with `k > m` equal the `k = m` entry and are not stored.
#[derive(Debug, Clone)]
pub struct TriangularTable<S> {
    kind: TableKind,
    max_n: usize,
    max_k: usize,
    store: S,
}

pub type BoundedTable = TriangularTable<LimbArena>;
pub type WideTable = TriangularTable<WideStore>;

fn cell_count(max_n: usize, max_k: usize) -> usize {
    let k = max_k.min(max_n);
    (k + 1) * (k + 2) / 2 + (max_n - k) * (k + 1)
}

impl<S: CellStore> TriangularTable<S> {
    pub fn estimated_bytes(kind: TableKind, max_n: usize, max_k: usize) -> usize {
        cell_count(max_n, max_k).saturating_mul(S::estimated_cell_bytes(kind.max_bits(max_n)))
    }

    /// Fill the table by the standard recurrences
    /// `p_{≤k}(m) = p_{≤k-1}(m) + p_{≤k}(m-k)` and
    /// `q_{≤k}(m) = q_{≤k-1}(m) + q_{≤k-1}(m-k)`.
    pub fn build(kind: TableKind, max_n: usize, max_k: usize, budget: MemoryBudget) -> Result<Self> {
        let need = Self::estimated_bytes(kind, max_n, max_k);
        if need > budget.bytes {
            return Err(Error::Resource(format!(
                "{} table for n ≤ {max_n}, k ≤ {max_k} needs about {} MiB (budget {} MiB)",
                kind.name(),
                need >> 20,
                budget.bytes >> 20
            )));
        }
        let mut table = Self {
            kind,
            max_n,
            max_k,
            store: S::with_capacity(cell_count(max_n, max_k)),
        };
        let zero = <S::Value as super::Weight>::zero();
        let one = <S::Value as super::Weight>::one();
        for m in 0..=max_n {
            table.store.push(if m == 0 { &one } else { &zero });
            for k in 1..=m.min(max_k) {
                let prev = table.index(m, k - 1);
                let rest_bound = match kind {
                    TableKind::BoundedPartition => k,
                    TableKind::BoundedDistinct => k - 1,
                };
                let rest = table.index(m - k, rest_bound);
                table.store.push_sum(prev, rest);
            }
        }
        debug_assert_eq!(table.store.len(), cell_count(max_n, max_k));
        Ok(table)
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn max_k(&self) -> usize {
        self.max_k
    }

    fn index(&self, m: usize, k: usize) -> usize {
        let k = k.min(m);
        if m <= self.max_k {
            m * (m + 1) / 2 + k
        } else {
            let base = (self.max_k + 1) * (self.max_k + 2) / 2;
            base + (m - self.max_k - 1) * (self.max_k + 1) + k
        }
    }

    /// The count for size `m` with parts at most `k`.
    ///
    /// Panics if `m > max_n` or `min(k, m) > max_k`.
    pub fn get(&self, m: usize, k: usize) -> S::Value {
        assert!(m <= self.max_n, "m = {m} beyond table size {}", self.max_n);
        assert!(k.min(m) <= self.max_k, "k = {k} beyond table bound {}", self.max_k);
        self.store.get(self.index(m, k))
    }

    pub fn heap_bytes(&self) -> usize {
        self.store.heap_bytes()
    }
}

impl BoundedTable {
    /// Rows `kind,n,k,count` for every stored cell.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "kind,n,k,count")?;
        for m in 0..=self.max_n {
            for k in 0..=m.min(self.max_k) {
                writeln!(w, "{},{m},{k},{}", self.kind.name(), self.get(m, k))?;
            }
        }
        Ok(())
    }
}

/// `p_{≤k}(m)` for `m ≤ n`, `k ≤ max_k`.
pub fn bounded_partition_table(n: usize, max_k: usize) -> Result<BoundedTable> {
    BoundedTable::build(TableKind::BoundedPartition, n, max_k, MemoryBudget::from_env()?)
}

/// `q_{≤k}(m)` for `m ≤ n`, `k ≤ max_k`.
pub fn bounded_distinct_table(n: usize, max_k: usize) -> Result<BoundedTable> {
    BoundedTable::build(TableKind::BoundedDistinct, n, max_k, MemoryBudget::from_env()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wide::Float192;
    use num_bigint::BigUint;

    fn brute(kind: TableKind, m: u32, k: u32) -> u64 {
        fn go(rem: u32, cap: u32, distinct: bool) -> u64 {
            if rem == 0 {
                return 1;
            }
            (1..=cap.min(rem))
                .map(|v| go(rem - v, if distinct { v - 1 } else { v }, distinct))
                .sum()
        }
        go(m, k, kind == TableKind::BoundedDistinct)
    }

    #[test]
    fn named_values() {
        let p = bounded_partition_table(10, 10).unwrap();
        assert_eq!(p.get(4, 2), BigUint::from(3u32));
        assert_eq!(p.get(4, 4), BigUint::from(5u32));
        assert_eq!(p.get(4, 9), BigUint::from(5u32));
        assert_eq!(p.get(5, 0), BigUint::from(0u32));
        for k in 0..=10 {
            assert_eq!(p.get(0, k), BigUint::from(1u32));
        }
        let q = bounded_distinct_table(10, 10).unwrap();
        assert_eq!(q.get(6, 3), BigUint::from(1u32));
        assert_eq!(q.get(6, 5), BigUint::from(3u32));
        assert_eq!(q.get(0, 7), BigUint::from(1u32));
        assert_eq!(q.get(7, 3), BigUint::from(0u32));
    }

    #[test]
    fn matches_brute_force_with_capped_k() {
        for kind in [TableKind::BoundedPartition, TableKind::BoundedDistinct] {
            for max_k in [0usize, 3, 7, 20] {
                let t = BoundedTable::build(kind, 20, max_k, MemoryBudget::default()).unwrap();
                for m in 0..=20u32 {
                    for k in 0..=max_k.min(m as usize) {
                        assert_eq!(t.get(m as usize, k), BigUint::from(brute(kind, m, k as u32)));
                    }
                }
            }
        }
    }

    #[test]
    fn monotone_in_k_and_saturates() {
        let p = bounded_partition_table(60, 60).unwrap();
        let q = bounded_distinct_table(60, 60).unwrap();
        for t in [&p, &q] {
            for m in 0..=60 {
                for k in 0..60 {
                    assert!(t.get(m, k) <= t.get(m, k + 1));
                }
            }
        }
        assert_eq!(p.get(60, 60).to_string(), "966467");
        assert_eq!(q.get(60, 60).to_string(), "10880");
    }

    #[test]
    fn wide_table_tracks_exact_table() {
        let exact = bounded_partition_table(300, 300).unwrap();
        let wide = WideTable::build(TableKind::BoundedPartition, 300, 300, MemoryBudget::default()).unwrap();
        for (m, k) in [(300, 300), (300, 17), (123, 45), (0, 0)] {
            assert_eq!(Float192::from_biguint(&exact.get(m, k)), wide.get(m, k));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let err = BoundedTable::build(TableKind::BoundedPartition, 5000, 5000, MemoryBudget::from_mb(1)).unwrap_err();
        assert!(err.is_resource());
    }

    #[test]
    fn csv_rows() {
        let mut out = Vec::new();
        bounded_partition_table(2, 2).unwrap().write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(
            text,
            "kind,n,k,count\np_le,0,0,1\np_le,1,0,0\np_le,1,1,1\np_le,2,0,0\np_le,2,1,1\np_le,2,2,2\n"
        );
    }
}
