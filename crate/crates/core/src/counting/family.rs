//! Family counts by summing over the peak.
//!
//! A member of size `n` with peak `m` splits into the parts left of the
//! (leftmost) peak and the parts right of it, each a restricted partition:
//!
//! | family | left half            | right half          |
//! |--------|----------------------|---------------------|
//! | `s`    | parts `≤ m-1`        | parts `≤ m`         |
//! | `d`    | distinct, `≤ m-1`    | distinct, `≤ m-1`   |
//! | `dm`   | distinct, `≤ m-1`    | parts `≤ m-1`       |
//!
//! so the count is `Σ_m Σ_{a+b=n-m} L_m(a) R_m(b)`.

use std::io::Write;

use num_bigint::BigUint;

use super::store::{CellStore, LimbArena, Weight, WideStore};
use super::table::{MemoryBudget, TableKind, TriangularTable};
use crate::error::{Error, Result};
use crate::exec::{fold_range, Execution};
use crate::model::Family;

/// One half of a peak decomposition: a table and the part bound `m - shrink`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Half {
    pub kind: TableKind,
    pub shrink: usize,
}

impl Half {
    pub fn bound(&self, peak: usize) -> usize {
        peak - self.shrink
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decomposition {
    pub left: Half,
    pub right: Half,
}

const P: TableKind = TableKind::BoundedPartition;
const Q: TableKind = TableKind::BoundedDistinct;

/// Left/right halves for a unimodal family; `None` for overpartitions.
pub fn decomposition(family: Family) -> Option<Decomposition> {
    let h = |kind, shrink| Half { kind, shrink };
    match family {
        Family::Unrestricted => Some(Decomposition { left: h(P, 1), right: h(P, 0) }),
        Family::Strong => Some(Decomposition { left: h(Q, 1), right: h(Q, 1) }),
        Family::SemiStrict => Some(Decomposition { left: h(Q, 1), right: h(P, 1) }),
        Family::Overpartition => None,
    }
}

fn kinds_for(family: Family) -> &'static [TableKind] {
    match family {
        Family::Unrestricted => &[P],
        Family::Strong => &[Q],
        Family::SemiStrict | Family::Overpartition => &[P, Q],
    }
}

/// The restricted-count tables a family needs, up to a common size.
#[derive(Debug)]
pub struct TableSet<S> {
    max_n: usize,
    partitions: Option<TriangularTable<S>>,
    distinct: Option<TriangularTable<S>>,
}

pub type ExactTables = TableSet<LimbArena>;
pub type WideTables = TableSet<WideStore>;

impl<S: CellStore> TableSet<S> {
    pub fn build(max_n: usize, kinds: &[TableKind], budget: MemoryBudget) -> Result<Self> {
        let build = |kind| -> Result<Option<TriangularTable<S>>> {
            if kinds.contains(&kind) {
                TriangularTable::build(kind, max_n, max_n, budget).map(Some)
            } else {
                Ok(None)
            }
        };
        Ok(Self {
            max_n,
            partitions: build(P)?,
            distinct: build(Q)?,
        })
    }

    /// Tables sufficient to count or sample `family` at sizes up to `n`
    /// (overpartitions of `n` also need semi-strict sequences of `n + 1`).
    pub fn for_family(family: Family, n: usize, budget: MemoryBudget) -> Result<Self> {
        let size = if family == Family::Overpartition { n + 1 } else { n };
        Self::build(size, kinds_for(family), budget)
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn table(&self, kind: TableKind) -> &TriangularTable<S> {
        let t = match kind {
            TableKind::BoundedPartition => &self.partitions,
            TableKind::BoundedDistinct => &self.distinct,
        };
        t.as_ref().unwrap_or_else(|| panic!("{} table was not built", kind.name()))
    }

    fn supports(&self, family: Family, n: usize) -> Result<()> {
        let size = if family == Family::Overpartition { n + 1 } else { n };
        let have = kinds_for(family).iter().all(|&k| match k {
            TableKind::BoundedPartition => self.partitions.is_some(),
            TableKind::BoundedDistinct => self.distinct.is_some(),
        });
        if size > self.max_n || !have {
            return Err(Error::Resource(format!(
                "tables up to {} do not cover {family} at n = {n}",
                self.max_n
            )));
        }
        Ok(())
    }

    /// `Σ_{a+b=total} L(a, left_bound) R(b, right_bound)`.
    pub fn convolve(&self, left: (TableKind, usize), right: (TableKind, usize), total: usize) -> S::Value {
        let (lt, rt) = (self.table(left.0), self.table(right.0));
        let mut acc = S::Value::zero();
        for a in 0..=total {
            let l = lt.get(a, left.1);
            if l.is_zero() {
                continue;
            }
            acc = acc.add(&l.mul(&rt.get(total - a, right.1)));
        }
        acc
    }

    /// Number of members of size `n` whose (leftmost) peak equals `m`.
    pub fn peak_term(&self, family: Family, n: usize, m: usize) -> S::Value {
        let dec = decomposition(family).expect("unimodal family");
        if m == 0 || m > n {
            return S::Value::zero();
        }
        self.convolve(
            (dec.left.kind, dec.left.bound(m)),
            (dec.right.kind, dec.right.bound(m)),
            n - m,
        )
    }

    /// `pbar(n) = Σ_a q(a) p(n - a)`, the coefficient of the overpartition product.
    pub fn overpartition_count(&self, n: usize) -> S::Value {
        self.convolve((Q, n), (P, n), n)
    }

    pub fn count(&self, family: Family, n: usize, exec: Execution) -> Result<S::Value> {
        self.supports(family, n)?;
        if family == Family::Overpartition {
            return Ok(self.overpartition_count(n));
        }
        Ok(self.peak_sum(family, n, n, exec))
    }

    /// Members of size `n` whose peak is at most `k`.
    pub fn peak_bounded(&self, family: Family, n: usize, k: usize, exec: Execution) -> Result<S::Value> {
        if family == Family::Overpartition {
            return Err(Error::validation("overpartitions have no peak"));
        }
        if k == 0 {
            return Err(Error::validation("peak bound must be at least 1"));
        }
        self.supports(family, n)?;
        Ok(self.peak_sum(family, n, k.min(n), exec))
    }

    fn peak_sum(&self, family: Family, n: usize, k: usize, exec: Execution) -> S::Value {
        fold_range(
            exec,
            1..k + 1,
            S::Value::zero,
            |acc, m| acc.add(&self.peak_term(family, n, m)),
            |a, b| a.add(&b),
        )
    }
}

impl ExactTables {
    /// Counts for every size `0..=max_n`, optionally with peaks at most `k`.
    ///
    /// Works one peak value at a time: the two half-generating polynomials
    /// are multiplied and shifted by the peak.
    pub fn series(&self, family: Family, max_n: usize, peak_limit: Option<usize>, exec: Execution) -> Result<Vec<BigUint>> {
        self.supports(family, max_n)?;
        if family == Family::Overpartition {
            return Ok((0..=max_n).map(|n| self.overpartition_count(n)).collect());
        }
        let dec = decomposition(family).expect("unimodal family");
        let top = peak_limit.unwrap_or(max_n).min(max_n);
        let zeros = || vec![BigUint::default(); max_n + 1];
        let (lt, rt) = (self.table(dec.left.kind), self.table(dec.right.kind));
        Ok(fold_range(
            exec,
            1..top + 1,
            zeros,
            |mut acc, m| {
                let span = max_n - m;
                let left: Vec<BigUint> = (0..=span).map(|a| lt.get(a, dec.left.bound(m))).collect();
                let right: Vec<BigUint> = (0..=span).map(|b| rt.get(b, dec.right.bound(m))).collect();
                for (a, l) in left.iter().enumerate() {
                    if l.bits() == 0 {
                        continue;
                    }
                    for (b, r) in right[..=span - a].iter().enumerate() {
                        acc[m + a + b] += l * r;
                    }
                }
                acc
            },
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        ))
    }
}

/// What a [`CountSeries`] counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    Family(Family),
    PeakBounded { family: Family, k: usize },
}

/// Exact counts indexed by size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountSeries {
    pub kind: SeriesKind,
    pub values: Vec<BigUint>,
}

impl CountSeries {
    /// Rows `kind,n,k,count`; `k` is empty for plain family counts. Counts
    /// are decimal strings.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "kind,n,k,count")?;
        for (n, v) in self.values.iter().enumerate() {
            match self.kind {
                SeriesKind::Family(f) => writeln!(w, "{f},{n},,{v}")?,
                SeriesKind::PeakBounded { family, k } => writeln!(w, "{family}_le,{n},{k},{v}")?,
            }
        }
        Ok(())
    }
}

/// Exact number of members of `family` of size `n`.
pub fn count_family(family: Family, n: usize) -> Result<BigUint> {
    let tables = ExactTables::for_family(family, n, MemoryBudget::from_env()?)?;
    tables.count(family, n, Execution::default())
}

/// Exact counts for all sizes `0..=max_n`.
pub fn family_series(family: Family, max_n: usize, exec: Execution) -> Result<CountSeries> {
    let tables = ExactTables::for_family(family, max_n, MemoryBudget::from_env()?)?;
    let mut values = tables.series(family, max_n, None, exec)?;
    values.truncate(max_n + 1);
    Ok(CountSeries {
        kind: SeriesKind::Family(family),
        values,
    })
}

/// Members of size `n` with peak at most `k`: `s_{≤k}(n)`, `d_{≤k}(n)`, `dm_{≤k}(n)`.
pub fn peak_bounded_count(family: Family, n: usize, k: usize) -> Result<BigUint> {
    let tables = ExactTables::for_family(family, n, MemoryBudget::from_env()?)?;
    tables.peak_bounded(family, n, k, Execution::default())
}

pub fn peak_bounded_series(family: Family, max_n: usize, k: usize, exec: Execution) -> Result<CountSeries> {
    if family == Family::Overpartition || k == 0 {
        return Err(Error::validation("peak bounds need a unimodal family and k ≥ 1"));
    }
    let tables = ExactTables::for_family(family, max_n, MemoryBudget::from_env()?)?;
    Ok(CountSeries {
        kind: SeriesKind::PeakBounded { family, k },
        values: tables.series(family, max_n, Some(k), exec)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn small_counts() {
        assert_eq!(count_family(Family::Unrestricted, 4).unwrap(), big(8));
        assert_eq!(count_family(Family::Overpartition, 3).unwrap(), big(8));
        assert_eq!(count_family(Family::Strong, 4).unwrap(), big(4));
        assert_eq!(count_family(Family::SemiStrict, 3).unwrap(), big(3));
        assert_eq!(count_family(Family::SemiStrict, 4).unwrap(), big(5));
        for f in Family::UNIMODAL {
            assert_eq!(count_family(f, 0).unwrap(), big(0));
        }
        assert_eq!(count_family(Family::Overpartition, 0).unwrap(), big(1));
    }

    #[test]
    fn peak_bounded_examples() {
        assert_eq!(peak_bounded_count(Family::SemiStrict, 4, 2).unwrap(), big(2));
        for n in 1..=15 {
            assert_eq!(peak_bounded_count(Family::Unrestricted, n, 1).unwrap(), big(1));
            assert_eq!(
                peak_bounded_count(Family::Unrestricted, n, n).unwrap(),
                count_family(Family::Unrestricted, n).unwrap()
            );
        }
        assert!(peak_bounded_count(Family::Strong, 4, 0).is_err());
        assert!(peak_bounded_count(Family::Overpartition, 4, 2).is_err());
    }

    #[test]
    fn series_agrees_with_single_counts() {
        for family in Family::ALL {
            let series = family_series(family, 40, Execution::Sequential).unwrap();
            let par = family_series(family, 40, Execution::Parallel).unwrap();
            assert_eq!(series, par);
            for n in [0, 1, 7, 23, 40] {
                assert_eq!(series.values[n], count_family(family, n).unwrap(), "{family} {n}");
            }
        }
        let bounded = peak_bounded_series(Family::SemiStrict, 30, 5, Execution::Parallel).unwrap();
        assert_eq!(bounded.values[4], big(5));
        assert_eq!(bounded.values[30], peak_bounded_count(Family::SemiStrict, 30, 5).unwrap());
    }

    #[test]
    fn csv_export() {
        let mut out = Vec::new();
        family_series(Family::Unrestricted, 3, Execution::Sequential)
            .unwrap()
            .write_csv(&mut out)
            .unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "kind,n,k,count\ns,0,,0\ns,1,,1\ns,2,,2\ns,3,,4\n");
    }

    #[test]
    fn tables_must_cover_request() {
        let t = ExactTables::for_family(Family::Strong, 10, MemoryBudget::default()).unwrap();
        assert!(t.count(Family::Strong, 11, Execution::Sequential).unwrap_err().is_resource());
        assert!(t.count(Family::Unrestricted, 5, Execution::Sequential).is_err());
    }
}
