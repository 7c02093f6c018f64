//! Monte Carlo checks of the limit shapes and of the statistics they
//! predict.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::curves::{Cover, LimitCurve, NeighborhoodSpec};
use crate::error::{Error, Result};
use crate::exec::{map_indices, Execution};
use crate::geometry::{overpartition_profile, renormalized_vertices, VertexClass};
use crate::model::Family;
use crate::sampling::{Mode, Sampled, Sampler, SamplerConfig};

pub const DEFAULT_N: usize = 1600;
pub const DEFAULT_EPSILON: f64 = 0.25;
pub const DEFAULT_SAMPLES: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    /// Number of parts, over `√n`.
    Parts,
    /// Right parts minus left parts, over `√n ln n / π`; semi-strict only.
    Rank,
    /// Peak value, over `√n`; unimodal families only.
    Peak,
    /// Sum of marked parts, over `n`; overpartitions only.
    MarkedWeight,
}

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Statistic::Parts => "parts",
            Statistic::Rank => "rank",
            Statistic::Peak => "peak",
            Statistic::MarkedWeight => "marked_weight",
        }
    }

    pub fn check(self, family: Family) -> Result<()> {
        let ok = match self {
            Statistic::Parts => true,
            Statistic::Rank => family == Family::SemiStrict,
            Statistic::Peak => family.is_unimodal(),
            Statistic::MarkedWeight => family == Family::Overpartition,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::validation(format!("statistic {} is not defined for {family}", self.name())))
        }
    }

    /// The divisor applied to raw values at size `n`.
    pub fn scale(self, n: usize) -> f64 {
        let nf = n as f64;
        match self {
            Statistic::Parts | Statistic::Peak => nf.sqrt(),
            Statistic::Rank => nf.sqrt() * nf.ln() / std::f64::consts::PI,
            Statistic::MarkedWeight => nf,
        }
    }

    fn raw(self, s: &Sampled) -> f64 {
        match (self, s) {
            (Statistic::Parts, Sampled::Sequence(q)) => q.len() as f64,
            (Statistic::Parts, Sampled::Overpartition(o)) => o.parts().len() as f64,
            (Statistic::Rank, Sampled::Sequence(q)) => q.rank() as f64,
            (Statistic::Peak, Sampled::Sequence(q)) => q.peak_info().peak_value as f64,
            (Statistic::MarkedWeight, Sampled::Overpartition(o)) => o.marked_weight() as f64,
            _ => unreachable!("checked against the family"),
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "parts" => Ok(Statistic::Parts),
            "rank" => Ok(Statistic::Rank),
            "peak" => Ok(Statistic::Peak),
            "marked_weight" | "marked" => Ok(Statistic::MarkedWeight),
            other => Err(Error::validation(format!("unknown statistic `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub family: Family,
    pub n: usize,
    pub epsilon: f64,
    pub samples: usize,
    pub seed: u64,
    pub mode: Mode,
}

impl ExperimentConfig {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        Self {
            family,
            n,
            epsilon: DEFAULT_EPSILON,
            samples: DEFAULT_SAMPLES,
            seed,
            mode: Mode::Exact,
        }
    }

    pub fn sampler_config(&self) -> SamplerConfig {
        SamplerConfig::new(self.family, self.n, self.seed).with_mode(self.mode)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    pub sd: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = if values.len() > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mid = sorted.len() / 2;
        let median = if sorted.len() % 2 == 1 {
            sorted[mid]
        } else {
            0.5 * (sorted[mid - 1] + sorted[mid])
        };
        Some(Self {
            mean,
            sd: var.sqrt(),
            median,
            min: sorted[0],
            max: sorted[sorted.len() - 1],
        })
    }
}

/// Largest horizontal distance beyond `ε` seen for one vertex class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WorstOffset {
    pub class: VertexClass,
    /// `distance - ε` for the worst uncovered vertex, 0 when all were
    /// covered; the coordinates and sample index locate it.
    pub excess: f64,
    pub x: f64,
    pub y: f64,
    pub sample: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub curve: Option<String>,
    pub statistic: Option<Statistic>,
    pub contained: Option<usize>,
    pub containment_fraction: Option<f64>,
    pub worst_offsets: Vec<WorstOffset>,
    pub scale: Option<f64>,
    pub summary: Option<Summary>,
    /// Extra numbers tied to the statistic, e.g. the largest peak
    /// multiplicity seen.
    pub notes: Vec<(String, f64)>,
    /// Normalized per-sample values, in sample order.
    pub values: Vec<f64>,
}

impl ExperimentReport {
    fn empty(config: ExperimentConfig) -> Self {
        Self {
            config,
            curve: None,
            statistic: None,
            contained: None,
            containment_fraction: None,
            worst_offsets: Vec::new(),
            scale: None,
            summary: None,
            notes: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn note(&self, key: &str) -> Option<f64> {
        self.notes.iter().find(|(k, _)| k == key).map(|p| p.1)
    }

    /// `quantity,value` rows.
    pub fn rows(&self) -> Vec<(String, String)> {
        let c = &self.config;
        let mut rows: Vec<(String, String)> = vec![
            ("family".into(), c.family.short_name().into()),
            ("n".into(), c.n.to_string()),
            ("epsilon".into(), c.epsilon.to_string()),
            ("samples".into(), c.samples.to_string()),
            ("seed".into(), c.seed.to_string()),
            ("mode".into(), c.mode.to_string()),
        ];
        if let Some(curve) = &self.curve {
            rows.push(("curve".into(), curve.clone()));
        }
        if let Some(k) = self.contained {
            rows.push(("contained".into(), k.to_string()));
        }
        if let Some(f) = self.containment_fraction {
            rows.push(("containment_fraction".into(), format!("{f:.6}")));
        }
        for w in &self.worst_offsets {
            let class = format!("{:?}", w.class).to_lowercase();
            rows.push((format!("worst_excess_{class}"), format!("{:.6}", w.excess)));
        }
        if let Some(s) = self.statistic {
            rows.push(("statistic".into(), s.name().into()));
        }
        if let Some(s) = self.scale {
            rows.push(("scale".into(), format!("{s:.6}")));
        }
        if let Some(s) = &self.summary {
            for (k, v) in [("mean", s.mean), ("sd", s.sd), ("median", s.median), ("min", s.min), ("max", s.max)] {
                rows.push((k.into(), format!("{v:.6}")));
            }
        }
        for (k, v) in &self.notes {
            rows.push((k.clone(), v.to_string()));
        }
        rows
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "quantity,value")?;
        for (k, v) in self.rows() {
            writeln!(w, "{k},{v}")?;
        }
        Ok(())
    }
}

/// Sample `M` members and test each against the family's limit curve.
pub fn verify_shape(config: ExperimentConfig, exec: Execution) -> Result<ExperimentReport> {
    let spec = NeighborhoodSpec::new(config.epsilon)?;
    let sampler = Sampler::new(config.sampler_config())?;
    verify_shape_with(&sampler, config, spec, exec)
}

pub fn verify_shape_with(
    sampler: &Sampler,
    config: ExperimentConfig,
    spec: NeighborhoodSpec,
    exec: Execution,
) -> Result<ExperimentReport> {
    let curve = LimitCurve::for_family(config.family);
    let results = map_indices(exec, config.samples, |i| -> Result<_> {
        let vertices = match sampler.sample_at(i as u64) {
            Sampled::Sequence(s) => renormalized_vertices(&s),
            Sampled::Overpartition(o) => overpartition_profile(&o)?,
        };
        Ok(curve.in_neighborhood(&vertices, spec))
    });

    let classes = [VertexClass::Left, VertexClass::Peak, VertexClass::Right];
    let mut worst: Vec<WorstOffset> = classes
        .iter()
        .map(|&class| WorstOffset {
            class,
            excess: 0.0,
            x: 0.0,
            y: 0.0,
            sample: None,
        })
        .collect();
    let mut contained = 0;
    for (i, r) in results.into_iter().enumerate() {
        let r = r?;
        contained += usize::from(r.contained);
        for v in r.vertices.iter().filter(|v| v.cover == Cover::Outside) {
            let slot = worst.iter_mut().find(|w| w.class == v.class).expect("known class");
            let excess = v.distance - spec.epsilon();
            if excess > slot.excess {
                *slot = WorstOffset {
                    class: v.class,
                    excess,
                    x: v.x,
                    y: v.y,
                    sample: Some(i),
                };
            }
        }
    }
    let mut report = ExperimentReport::empty(config);
    report.curve = Some(curve.name().to_string());
    report.contained = Some(contained);
    report.containment_fraction = Some(if config.samples == 0 {
        0.0
    } else {
        contained as f64 / config.samples as f64
    });
    report.worst_offsets = worst;
    Ok(report)
}

/// Sample `M` members and summarize one normalized statistic.
pub fn stats(config: ExperimentConfig, statistic: Statistic, exec: Execution) -> Result<ExperimentReport> {
    statistic.check(config.family)?;
    if config.n == 0 {
        return Err(Error::validation("statistics need n ≥ 1"));
    }
    let sampler = Sampler::new(config.sampler_config())?;
    stats_with(&sampler, config, statistic, exec)
}

pub fn stats_with(
    sampler: &Sampler,
    config: ExperimentConfig,
    statistic: Statistic,
    exec: Execution,
) -> Result<ExperimentReport> {
    statistic.check(config.family)?;
    let scale = statistic.scale(config.n);
    let drawn = map_indices(exec, config.samples, |i| {
        let s = sampler.sample_at(i as u64);
        let mult = s.as_sequence().map(|q| q.peak_info().multiplicity);
        (statistic.raw(&s) / scale, mult)
    });
    let mut report = ExperimentReport::empty(config);
    report.statistic = Some(statistic);
    report.scale = Some(scale);
    report.values = drawn.iter().map(|d| d.0).collect();
    report.summary = Summary::of(&report.values);
    if statistic == Statistic::Peak {
        let max = drawn.iter().filter_map(|d| d.1).max().unwrap_or(0);
        report.notes.push(("max_peak_multiplicity".into(), max as f64));
    }
    Ok(report)
}
