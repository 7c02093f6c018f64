//! Uniform random generation by inverse transform over the peak
//! decomposition.
//!
//! A draw picks the peak `m` in proportion to the number of members with
//! that peak, then the split of the remaining `n - m` between the two sides,
//! then each side by walking its restricted-count table one part size at a
//! time. In exact mode every choice compares a uniform integer below an
//! exact count, so the output is exactly uniform. Overpartitions are drawn
//! as semi-strict sequences of size `n` or `n + 1` and mapped across.
//!
//! Sample `i` of a batch with seed `s` always uses ChaCha12 seeded with `s`
//! on stream `i`, so batches do not depend on the number of workers.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::bijection::{dm_to_overpartition, BijectionCase};
use crate::counting::{
    decomposition, CellStore, LimbArena, MemoryBudget, TableKind, TableSet, TriangularTable, Weight, WideStore,
};
use crate::error::{Error, Result};
use crate::exec::{map_indices, Execution};
use crate::model::{Family, Overpartition, UnimodalSequence};

pub const DEFAULT_EXACT_THRESHOLD: usize = 2000;

/// The generator behind every sample.
pub type SampleRng = ChaCha12Rng;

/// Generator for sample `index` of a batch seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> SampleRng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Big-integer tables; exactly uniform.
    Exact,
    /// 192-bit floating tables; each decision is off by at most about
    /// `2^-120` in probability.
    HighPrecision,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::HighPrecision => "high_precision",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "exact" => Ok(Mode::Exact),
            "high_precision" | "highprecision" | "hp" => Ok(Mode::HighPrecision),
            other => Err(Error::validation(format!("unknown sampling mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SamplerConfig {
    pub n: usize,
    pub family: Family,
    pub seed: u64,
    pub mode: Mode,
    /// Largest `n` accepted in exact mode.
    pub exact_threshold: usize,
}

impl SamplerConfig {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        Self {
            n,
            family,
            seed,
            mode: Mode::Exact,
            exact_threshold: DEFAULT_EXACT_THRESHOLD,
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.mode == Mode::Exact && self.n > self.exact_threshold {
            return Err(Error::Resource(format!(
                "exact sampling is limited to n ≤ {}; use high-precision mode for n = {}",
                self.exact_threshold, self.n
            )));
        }
        Ok(())
    }
}

/// One sampled object.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(untagged)]
pub enum Sampled {
    Sequence(UnimodalSequence),
    Overpartition(Overpartition),
}

impl Sampled {
    pub fn size(&self) -> u64 {
        match self {
            Sampled::Sequence(s) => s.size(),
            Sampled::Overpartition(o) => o.size(),
        }
    }

    pub fn as_sequence(&self) -> Option<&UnimodalSequence> {
        match self {
            Sampled::Sequence(s) => Some(s),
            Sampled::Overpartition(_) => None,
        }
    }

    pub fn as_overpartition(&self) -> Option<&Overpartition> {
        match self {
            Sampled::Overpartition(o) => Some(o),
            Sampled::Sequence(_) => None,
        }
    }
}

impl fmt::Display for Sampled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sampled::Sequence(s) => s.fmt(f),
            Sampled::Overpartition(o) => o.fmt(f),
        }
    }
}

/// Index of the first running total exceeding `r`. Rounding in
/// high-precision mode can leave `r` at or above the last total; the last
/// index carrying weight is used then.
fn pick<W: Weight>(cumulative: &[W], r: &W) -> usize {
    let i = cumulative.partition_point(|c| c <= r);
    if i < cumulative.len() {
        return i;
    }
    let mut j = cumulative.len() - 1;
    while j > 0 && cumulative[j] <= cumulative[j - 1] {
        j -= 1;
    }
    j
}

/// A uniform restricted partition of `a` with parts at most `k`, in
/// decreasing order, drawn from `table`.
pub fn sample_bounded_in<S: CellStore, R: Rng + ?Sized>(
    table: &TriangularTable<S>,
    a: usize,
    k: usize,
    rng: &mut R,
) -> Result<Vec<u32>> {
    if a > table.max_n() {
        return Err(Error::Resource(format!("table covers sizes up to {}, asked for {a}", table.max_n())));
    }
    if table.get(a, k).is_zero() {
        return Err(Error::Impossible(format!(
            "no {} of {a} with parts at most {k}",
            table.kind().name()
        )));
    }
    let distinct = table.kind() == TableKind::BoundedDistinct;
    let mut parts = Vec::new();
    let (mut a, mut k) = (a, k.min(a));
    while a > 0 {
        k = k.min(a);
        let skip = table.get(a, k - 1);
        let take = table.get(a - k, if distinct { k - 1 } else { k });
        let use_k = if skip.is_zero() {
            true
        } else if take.is_zero() {
            false
        } else {
            let total = skip.add(&take);
            S::Value::threshold(rng, &total) >= skip
        };
        if use_k {
            parts.push(k as u32);
            a -= k;
            if distinct {
                k -= 1;
            }
        } else {
            k -= 1;
        }
    }
    Ok(parts)
}

/// A uniform partition of `a` into parts at most `k` (distinct parts for
/// [`TableKind::BoundedDistinct`]), in decreasing order.
pub fn sample_bounded<R: Rng + ?Sized>(kind: TableKind, a: usize, k: usize, rng: &mut R) -> Result<Vec<u32>> {
    let table = TriangularTable::<LimbArena>::build(kind, a, a, MemoryBudget::from_env()?)?;
    sample_bounded_in(&table, a, k, rng)
}

/// Cumulative peak weights of one family at one size.
#[derive(Debug, Clone)]
struct PeakPlan<V> {
    family: Family,
    n: usize,
    /// `cumulative[m - 1] = Σ_{j ≤ m}` members with peak `j`.
    cumulative: Vec<V>,
}

impl<V: Weight> PeakPlan<V> {
    fn build<S: CellStore<Value = V>>(tables: &TableSet<S>, family: Family, n: usize, exec: Execution) -> Self {
        let terms = map_indices(exec, n, |i| tables.peak_term(family, n, i + 1));
        let mut acc = V::zero();
        let cumulative = terms
            .into_iter()
            .map(|t| {
                acc = acc.add(&t);
                acc.clone()
            })
            .collect();
        Self { family, n, cumulative }
    }

    fn total(&self) -> V {
        self.cumulative.last().cloned().unwrap_or_else(V::zero)
    }

    fn draw<S: CellStore<Value = V>, R: Rng + ?Sized>(&self, tables: &TableSet<S>, rng: &mut R) -> UnimodalSequence {
        let r = V::threshold(rng, &self.total());
        let m = pick(&self.cumulative, &r) + 1;
        let dec = decomposition(self.family).expect("unimodal family");
        let (lb, rb) = (dec.left.bound(m), dec.right.bound(m));
        let (lt, rt) = (tables.table(dec.left.kind), tables.table(dec.right.kind));
        let rest = self.n - m;

        let mut acc = V::zero();
        let split: Vec<V> = (0..=rest)
            .map(|a| {
                let l = lt.get(a, lb);
                if !l.is_zero() {
                    acc = acc.add(&l.mul(&rt.get(rest - a, rb)));
                }
                acc.clone()
            })
            .collect();
        let r = V::threshold(rng, &acc);
        let a = pick(&split, &r);

        let mut left = sample_bounded_in(lt, a, lb, rng).expect("split has positive weight");
        let right = sample_bounded_in(rt, rest - a, rb, rng).expect("split has positive weight");
        left.reverse();
        left.push(m as u32);
        left.extend(right);
        UnimodalSequence::from_parts_unchecked(left)
    }
}

#[derive(Debug, Clone)]
enum Target<V> {
    Unimodal(PeakPlan<V>),
    /// Semi-strict sequences of sizes `n` (case A) and `n + 1` (case B).
    Overpartition { a: PeakPlan<V>, b: PeakPlan<V> },
}

#[derive(Debug)]
struct Plan<S: CellStore> {
    tables: TableSet<S>,
    target: Target<S::Value>,
}

impl<S: CellStore> Plan<S> {
    fn build(family: Family, n: usize, budget: MemoryBudget, exec: Execution) -> Result<Self> {
        let tables = TableSet::<S>::for_family(family, n, budget)?;
        let target = match family {
            Family::Overpartition => Target::Overpartition {
                a: PeakPlan::build(&tables, Family::SemiStrict, n, exec),
                b: PeakPlan::build(&tables, Family::SemiStrict, n + 1, exec),
            },
            f => {
                let plan = PeakPlan::build(&tables, f, n, exec);
                if plan.total().is_zero() {
                    return Err(Error::Impossible(format!("{f} has no members of size {n}")));
                }
                Target::Unimodal(plan)
            }
        };
        Ok(Self { tables, target })
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Sampled {
        match &self.target {
            Target::Unimodal(p) => Sampled::Sequence(p.draw(&self.tables, rng)),
            Target::Overpartition { a, b } => {
                let (wa, wb) = (a.total(), b.total());
                let r = S::Value::threshold(rng, &wa.add(&wb));
                let (plan, case) = if r < wa {
                    (a, BijectionCase::A)
                } else {
                    (b, BijectionCase::B)
                };
                let seq = plan.draw(&self.tables, rng);
                Sampled::Overpartition(dm_to_overpartition(&seq, case).expect("semi-strict by construction"))
            }
        }
    }

    fn checksum(&self, hasher: &mut Sha256) {
        let plans: Vec<&PeakPlan<S::Value>> = match &self.target {
            Target::Unimodal(p) => vec![p],
            Target::Overpartition { a, b } => vec![a, b],
        };
        for p in plans {
            hasher.update(p.family.short_name().as_bytes());
            hasher.update((p.n as u64).to_le_bytes());
            for c in &p.cumulative {
                let bytes = c.to_bytes();
                hasher.update((bytes.len() as u64).to_le_bytes());
                hasher.update(&bytes);
            }
        }
    }
}

#[derive(Debug)]
enum Engine {
    Exact(Plan<LimbArena>),
    Wide(Plan<WideStore>),
}

/// A reusable sampler for one family and size.
#[derive(Debug)]
pub struct Sampler {
    config: SamplerConfig,
    engine: Engine,
}

/// First record of a JSON-lines batch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BatchHeader {
    pub family: String,
    pub n: usize,
    pub seed: u64,
    pub mode: Mode,
    /// SHA-256 of the peak distribution the sampler draws from.
    pub table_checksum: String,
    pub version: String,
    pub samples: usize,
    /// Command line that produced the batch, when known.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub args: Vec<String>,
}

impl Sampler {
    /// Build tables under the budget taken from the environment.
    pub fn new(config: SamplerConfig) -> Result<Self> {
        Self::with_budget(config, MemoryBudget::from_env()?, Execution::default())
    }

    pub fn with_budget(config: SamplerConfig, budget: MemoryBudget, exec: Execution) -> Result<Self> {
        config.validate()?;
        let engine = match config.mode {
            Mode::Exact => Engine::Exact(Plan::build(config.family, config.n, budget, exec)?),
            Mode::HighPrecision => Engine::Wide(Plan::build(config.family, config.n, budget, exec)?),
        };
        Ok(Self { config, engine })
    }

    pub fn config(&self) -> &SamplerConfig {
        &self.config
    }

    /// Exact number of objects being sampled from (exact mode only).
    pub fn population(&self) -> Option<BigUint> {
        match &self.engine {
            Engine::Exact(p) => Some(match &p.target {
                Target::Unimodal(u) => u.total(),
                Target::Overpartition { a, b } => a.total() + b.total(),
            }),
            Engine::Wide(_) => None,
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Sampled {
        match &self.engine {
            Engine::Exact(p) => p.draw(rng),
            Engine::Wide(p) => p.draw(rng),
        }
    }

    /// Sample `index` of the configured seed's stream.
    pub fn sample_at(&self, index: u64) -> Sampled {
        self.draw(&mut sample_rng(self.config.seed, index))
    }

    /// Samples `0..count`, identical under either execution mode.
    pub fn batch(&self, count: usize, exec: Execution) -> Vec<Sampled> {
        map_indices(exec, count, |i| self.sample_at(i as u64))
    }

    pub fn checksum(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.config.mode.to_string().as_bytes());
        match &self.engine {
            Engine::Exact(p) => p.checksum(&mut h),
            Engine::Wide(p) => p.checksum(&mut h),
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn header(&self, samples: usize) -> BatchHeader {
        BatchHeader {
            family: self.config.family.short_name().to_string(),
            n: self.config.n,
            seed: self.config.seed,
            mode: self.config.mode,
            table_checksum: self.checksum(),
            version: crate::VERSION.to_string(),
            samples,
            args: Vec::new(),
        }
    }

    /// Header line followed by one JSON record per sample.
    pub fn write_jsonl<W: Write>(&self, samples: &[Sampled], w: W) -> Result<()> {
        write_jsonl(&self.header(samples.len()), samples, w)
    }
}

/// `header` followed by one JSON record per sample.
pub fn write_jsonl<W: Write>(header: &BatchHeader, samples: &[Sampled], mut w: W) -> Result<()> {
    let io = |e: std::io::Error| Error::Resource(format!("write failed: {e}"));
    let json = |e: serde_json::Error| Error::Resource(format!("serialization failed: {e}"));
    serde_json::to_writer(&mut w, header).map_err(json)?;
    writeln!(w).map_err(io)?;
    for s in samples {
        serde_json::to_writer(&mut w, s).map_err(json)?;
        writeln!(w).map_err(io)?;
    }
    Ok(())
}

/// One uniform member of a unimodal family. Builds fresh tables; use a
/// [`Sampler`] for repeated draws.
pub fn sample<R: Rng + ?Sized>(family: Family, n: usize, rng: &mut R) -> Result<UnimodalSequence> {
    if family == Family::Overpartition {
        return Err(Error::validation("use sample_overpartition for overpartitions"));
    }
    let plan = Plan::<LimbArena>::build(family, n, MemoryBudget::from_env()?, Execution::Sequential)?;
    match plan.draw(rng) {
        Sampled::Sequence(s) => Ok(s),
        Sampled::Overpartition(_) => unreachable!("unimodal target"),
    }
}

/// One uniform overpartition of `n`.
pub fn sample_overpartition<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Overpartition> {
    let plan = Plan::<LimbArena>::build(Family::Overpartition, n, MemoryBudget::from_env()?, Execution::Sequential)?;
    match plan.draw(rng) {
        Sampled::Overpartition(o) => Ok(o),
        Sampled::Sequence(_) => unreachable!("overpartition target"),
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use super::*;
    use crate::enumerate::{enumerate_family, enumerate_overpartitions};

    fn rng(seed: u64) -> SampleRng {
        sample_rng(seed, 0)
    }

    /// Every outcome within 4σ of its expected frequency.
    fn assert_uniform<T: std::hash::Hash + Eq + fmt::Debug>(draws: &[T], support: &[T]) {
        let mut counts: HashMap<&T, usize> = HashMap::new();
        for d in draws {
            assert!(support.contains(d), "{d:?} outside support");
            *counts.entry(d).or_default() += 1;
        }
        let n = draws.len() as f64;
        let p = 1.0 / support.len() as f64;
        let sd = (n * p * (1.0 - p)).sqrt();
        for s in support {
            let c = *counts.get(s).unwrap_or(&0) as f64;
            assert!((c - n * p).abs() <= 4.0 * sd, "{s:?}: {c} vs {}", n * p);
        }
    }

    #[test]
    fn bounded_edge_cases() {
        let mut r = rng(1);
        assert!(sample_bounded(TableKind::BoundedPartition, 0, 5, &mut r).unwrap().is_empty());
        assert!(sample_bounded(TableKind::BoundedPartition, 0, 0, &mut r).unwrap().is_empty());
        for _ in 0..20 {
            assert_eq!(sample_bounded(TableKind::BoundedDistinct, 6, 3, &mut r).unwrap(), vec![3, 2, 1]);
        }
        assert!(matches!(
            sample_bounded(TableKind::BoundedDistinct, 7, 3, &mut r),
            Err(Error::Impossible(_))
        ));
        assert!(matches!(
            sample_bounded(TableKind::BoundedPartition, 3, 0, &mut r),
            Err(Error::Impossible(_))
        ));
    }

    #[test]
    fn bounded_partitions_of_four() {
        let mut r = rng(2);
        let table = TriangularTable::<LimbArena>::build(TableKind::BoundedPartition, 4, 4, MemoryBudget::default()).unwrap();
        let draws: Vec<Vec<u32>> = (0..3000).map(|_| sample_bounded_in(&table, 4, 2, &mut r).unwrap()).collect();
        assert_uniform(&draws, &[vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]);
    }

    #[test]
    fn family_draws_are_uniform() {
        for (family, n) in [(Family::Unrestricted, 4), (Family::SemiStrict, 4), (Family::Strong, 6)] {
            let support = enumerate_family(family, n).unwrap();
            let s = Sampler::new(SamplerConfig::new(family, n, 7)).unwrap();
            let draws: Vec<UnimodalSequence> = s
                .batch(1000 * support.len(), Execution::Sequential)
                .into_iter()
                .map(|x| x.as_sequence().unwrap().clone())
                .collect();
            assert_uniform(&draws, &support);
        }
    }

    #[test]
    fn strong_of_one() {
        let mut r = rng(3);
        for _ in 0..10 {
            assert_eq!(sample(Family::Strong, 1, &mut r).unwrap().parts(), [1]);
        }
        assert!(matches!(sample(Family::Strong, 0, &mut r), Err(Error::Impossible(_))));
    }

    #[test]
    fn overpartitions_are_uniform() {
        let mut r = rng(4);
        assert_eq!(sample_overpartition(0, &mut r).unwrap(), Overpartition::empty());
        for n in [1, 3] {
            let support = enumerate_overpartitions(n).unwrap();
            let s = Sampler::new(SamplerConfig::new(Family::Overpartition, n, 11)).unwrap();
            let draws: Vec<Overpartition> = s
                .batch(1000 * support.len(), Execution::Sequential)
                .into_iter()
                .map(|x| x.as_overpartition().unwrap().clone())
                .collect();
            assert_uniform(&draws, &support);
        }
    }

    #[test]
    fn draws_belong_to_their_family() {
        for family in Family::UNIMODAL {
            let s = Sampler::new(SamplerConfig::new(family, 60, 5)).unwrap();
            for x in s.batch(50, Execution::Sequential) {
                let seq = x.as_sequence().unwrap();
                assert_eq!(seq.size(), 60);
                assert!(seq.membership().contains(family));
            }
        }
    }

    #[test]
    fn batches_are_reproducible_across_execution() {
        let cfg = SamplerConfig::new(Family::SemiStrict, 40, 99);
        let s = Sampler::new(cfg).unwrap();
        let a = s.batch(64, Execution::Sequential);
        let b = s.batch(64, Execution::Parallel);
        assert_eq!(a, b);
        assert_eq!(Sampler::new(cfg).unwrap().batch(64, Execution::Sequential), a);
        let other = Sampler::new(SamplerConfig { seed: 100, ..cfg }).unwrap();
        assert_ne!(other.batch(64, Execution::Sequential), a);
    }

    #[test]
    fn high_precision_mode() {
        let support = enumerate_family(Family::Unrestricted, 5).unwrap();
        let cfg = SamplerConfig::new(Family::Unrestricted, 5, 8).with_mode(Mode::HighPrecision);
        let s = Sampler::new(cfg).unwrap();
        assert!(s.population().is_none());
        let draws: Vec<UnimodalSequence> = s
            .batch(800 * support.len(), Execution::Sequential)
            .into_iter()
            .map(|x| x.as_sequence().unwrap().clone())
            .collect();
        assert_uniform(&draws, &support);

        let big = SamplerConfig::new(Family::Strong, 2500, 1);
        assert!(matches!(Sampler::new(big), Err(Error::Resource(_))));
        let s = Sampler::new(big.with_mode(Mode::HighPrecision)).unwrap();
        let x = s.sample_at(0);
        assert_eq!(x.size(), 2500);
        assert!(x.as_sequence().unwrap().membership().strong);
    }

    #[test]
    fn jsonl_output() {
        let s = Sampler::new(SamplerConfig::new(Family::Overpartition, 4, 3)).unwrap();
        let samples = s.batch(3, Execution::Sequential);
        let mut buf = Vec::new();
        s.write_jsonl(&samples, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        let header: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
        assert_eq!(header["family"], "pbar");
        assert_eq!(header["mode"], "exact");
        assert_eq!(header["table_checksum"].as_str().unwrap().len(), 64);
        let back: Overpartition = serde_json::from_str(lines[1]).unwrap();
        assert_eq!(back.size(), 4);
        assert_eq!(s.population(), Some(BigUint::from(14u32)));
    }
}
