//! The five limit curves, their branch inverses, areas and the
//! ε-neighbourhood test for renormalized diagrams.
//!
//! Every curve is built from two shapes with a rate `c`:
//!
//! * the *tail* `-(1/c) ln(1 - e^{-c|x|})`, which is self-inverse and has
//!   area `Li₂(1)/c²` on `(0, ∞)`;
//! * the *cap* `-(1/c) ln(e^{c|x|} - 1)` on `(0, ln2/c]`, with inverse
//!   `(1/c) ln(1 + e^{-cy})` and area `-Li₂(-1)/c²`.
//!
//! `f_d` is a cap on both sides, `f_s` a tail on both sides, `f_dm` a cap on
//! the left and a tail on the right, `f_p` a single tail and `f_p̄` the sum of
//! a tail and `(1/c) ln(1 + e^{-cx})`.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{VertexClass, VertexSet};
use crate::model::Family;
use crate::quad;
use crate::special::dilog;

/// Absolute tolerance used for every curve quadrature.
pub const AREA_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CurveFamily {
    /// `f_d`, strongly unimodal sequences.
    Strong,
    /// `f_s`, unrestricted unimodal sequences.
    Unrestricted,
    /// `f_dm`, semi-strict unimodal sequences.
    SemiStrict,
    /// `f_p`, ordinary partitions.
    Partition,
    /// `f_p̄`, overpartitions.
    Overpartition,
}

impl CurveFamily {
    pub const ALL: [CurveFamily; 5] = [
        CurveFamily::Strong,
        CurveFamily::Unrestricted,
        CurveFamily::SemiStrict,
        CurveFamily::Partition,
        CurveFamily::Overpartition,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CurveFamily::Strong => "f_d",
            CurveFamily::Unrestricted => "f_s",
            CurveFamily::SemiStrict => "f_dm",
            CurveFamily::Partition => "f_p",
            CurveFamily::Overpartition => "f_pbar",
        }
    }

    /// The limit curve of a sequence family.
    pub fn of(family: Family) -> Self {
        match family {
            Family::Strong => CurveFamily::Strong,
            Family::Unrestricted => CurveFamily::Unrestricted,
            Family::SemiStrict => CurveFamily::SemiStrict,
            Family::Overpartition => CurveFamily::Overpartition,
        }
    }
}

impl fmt::Display for CurveFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CurveFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        let key = key.strip_prefix("f_").unwrap_or(&key);
        match key {
            "d" => Ok(CurveFamily::Strong),
            "s" => Ok(CurveFamily::Unrestricted),
            "dm" => Ok(CurveFamily::SemiStrict),
            "p" => Ok(CurveFamily::Partition),
            "pbar" | "p̄" | "overpartition" => Ok(CurveFamily::Overpartition),
            _ => key
                .parse::<Family>()
                .map(CurveFamily::of)
                .map_err(|_| Error::validation(format!("unknown curve '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    Left,
    Right,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Left => "left",
            Branch::Right => "right",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    Cap,
    Tail,
    OverTail,
}

/// Support of one branch. `inner` is the pole at `x = 0`; `outer` is the
/// far end, `None` when unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Piece {
    pub branch: Branch,
    pub inner: f64,
    pub outer: Option<f64>,
}

impl Piece {
    pub fn contains(&self, x: f64) -> bool {
        let (lo, hi) = self.interval();
        x > lo.min(hi) && x < lo.max(hi) || Some(x) == self.outer
    }

    /// `(inner, outer)` with infinities for unbounded ends.
    pub fn interval(&self) -> (f64, f64) {
        let far = match self.branch {
            Branch::Left => f64::NEG_INFINITY,
            Branch::Right => f64::INFINITY,
        };
        (self.inner, self.outer.unwrap_or(far))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitCurve {
    pub family: CurveFamily,
    pub c: f64,
}

/// `ln(1 - e^{-u})` for `u > 0`, accurate at both ends.
fn ln_one_minus_exp_neg(u: f64) -> f64 {
    let e = (-u).exp();
    if e < 0.5 {
        (-e).ln_1p()
    } else {
        (-(-u).exp_m1()).ln()
    }
}

impl LimitCurve {
    pub fn new(family: CurveFamily) -> Self {
        let c = match family {
            CurveFamily::Strong | CurveFamily::Partition => PI / 6f64.sqrt(),
            CurveFamily::Unrestricted => PI / 3f64.sqrt(),
            CurveFamily::SemiStrict | CurveFamily::Overpartition => PI / 2.0,
        };
        Self { family, c }
    }

    pub fn for_family(family: Family) -> Self {
        Self::new(CurveFamily::of(family))
    }

    pub fn name(&self) -> &'static str {
        self.family.name()
    }

    fn shape(&self, branch: Branch) -> Shape {
        match (self.family, branch) {
            (CurveFamily::Strong, _) | (CurveFamily::SemiStrict, Branch::Left) => Shape::Cap,
            (CurveFamily::Overpartition, _) => Shape::OverTail,
            _ => Shape::Tail,
        }
    }

    /// Width of a cap branch, `ln2/c`.
    pub fn cap_width(&self) -> f64 {
        LN_2 / self.c
    }

    pub fn branches(&self) -> &'static [Branch] {
        match self.family {
            CurveFamily::Partition | CurveFamily::Overpartition => &[Branch::Right],
            _ => &[Branch::Left, Branch::Right],
        }
    }

    pub fn pieces(&self) -> Vec<Piece> {
        self.branches()
            .iter()
            .map(|&branch| {
                let outer = match self.shape(branch) {
                    Shape::Cap => Some(match branch {
                        Branch::Left => -self.cap_width(),
                        Branch::Right => self.cap_width(),
                    }),
                    _ => None,
                };
                Piece {
                    branch,
                    inner: 0.0,
                    outer,
                }
            })
            .collect()
    }

    /// Height of a branch at distance `u = |x| > 0` from the pole.
    fn profile(&self, shape: Shape, u: f64) -> f64 {
        let c = self.c;
        match shape {
            Shape::Cap => -(c * u).exp_m1().ln() / c,
            Shape::Tail => -ln_one_minus_exp_neg(c * u) / c,
            Shape::OverTail => ((-c * u).exp().ln_1p() - ln_one_minus_exp_neg(c * u)) / c,
        }
    }

    /// Inverse of [`LimitCurve::profile`], returning `u`.
    fn profile_inverse(&self, shape: Shape, y: f64) -> f64 {
        let c = self.c;
        match shape {
            Shape::Cap => (-c * y).exp().ln_1p() / c,
            Shape::Tail | Shape::OverTail => self.profile(shape, y),
        }
    }

    pub fn branch_of(&self, x: f64) -> Result<Branch> {
        let curve = self.name();
        if x.is_nan() {
            return Err(Error::Domain { curve, x });
        }
        if x == 0.0 {
            return Err(Error::Pole { curve, x });
        }
        self.pieces()
            .into_iter()
            .find(|p| p.contains(x))
            .map(|p| p.branch)
            .ok_or(Error::Domain { curve, x })
    }

    /// The curve's value at `x`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let branch = self.branch_of(x)?;
        Ok(self.profile(self.shape(branch), x.abs()).max(0.0))
    }

    /// The point of `branch` at height `y`.
    pub fn inverse(&self, branch: Branch, y: f64) -> Result<f64> {
        let shape = self.shape(branch);
        let ok = match shape {
            Shape::Cap => y >= 0.0,
            _ => y > 0.0,
        };
        if !ok || !y.is_finite() || !self.branches().contains(&branch) {
            return Err(Error::Range {
                curve: self.name(),
                branch: branch.name(),
                y,
            });
        }
        let u = self.profile_inverse(shape, y);
        Ok(match branch {
            Branch::Left => -u,
            Branch::Right => u,
        })
    }

    /// Area under each branch by adaptive quadrature.
    pub fn area(&self) -> CurveArea {
        let pieces = self
            .pieces()
            .into_iter()
            .map(|p| {
                let shape = self.shape(p.branch);
                let f = |u: f64| self.profile(shape, u);
                let a = match p.outer {
                    Some(o) => quad::integrate_endpoints(f, 0.0, o.abs(), AREA_TOLERANCE),
                    None => {
                        quad::integrate_endpoints(f, 0.0, 1.0, AREA_TOLERANCE / 2.0)
                            + quad::integrate_to_infinity(f, 1.0, AREA_TOLERANCE / 2.0)
                    }
                };
                (p.branch, a)
            })
            .collect();
        CurveArea { pieces }
    }

    /// Area under each branch from the dilogarithm closed forms.
    pub fn closed_form_area(&self) -> CurveArea {
        let c2 = self.c * self.c;
        let pieces = self
            .branches()
            .iter()
            .map(|&b| {
                let a = match self.shape(b) {
                    Shape::Cap => -dilog(-1.0) / c2,
                    Shape::Tail => dilog(1.0) / c2,
                    Shape::OverTail => (dilog(1.0) - dilog(-1.0)) / c2,
                };
                (b, a)
            })
            .collect();
        CurveArea { pieces }
    }

    /// One branch moved right by `shift`.
    pub fn translated(&self, branch: Branch, shift: f64) -> TranslatedBranch {
        TranslatedBranch {
            curve: *self,
            branch,
            shift,
        }
    }

    /// Sample every branch on a grid of spacing `step`, stopping unbounded
    /// branches at `|x| = x_max`. The pole itself is skipped.
    pub fn tabulate(&self, step: f64, x_max: f64) -> Result<Vec<CurvePoint>> {
        if !(step > 0.0 && step.is_finite()) || !(x_max > 0.0) {
            return Err(Error::validation("step and x_max must be positive"));
        }
        let mut out = Vec::new();
        for p in self.pieces() {
            let (inner, outer) = p.interval();
            let span = outer.abs().min(x_max);
            let sign = if outer < inner { -1.0 } else { 1.0 };
            let count = (span / step).floor() as usize;
            let mut xs: Vec<f64> = (1..=count).map(|i| sign * i as f64 * step).collect();
            if p.outer.is_some() && xs.last().is_none_or(|&x| (x.abs() - span).abs() > 1e-12) {
                xs.push(sign * span);
            }
            if p.branch == Branch::Left {
                xs.reverse();
            }
            for x in xs {
                out.push(CurvePoint {
                    family: self.family,
                    branch: p.branch,
                    x,
                    y: self.eval(x)?,
                });
            }
        }
        Ok(out)
    }
}

/// Area beneath a curve, split by branch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveArea {
    pub pieces: Vec<(Branch, f64)>,
}

impl CurveArea {
    pub fn total(&self) -> f64 {
        self.pieces.iter().map(|p| p.1).sum()
    }

    pub fn branch(&self, b: Branch) -> Option<f64> {
        self.pieces.iter().find(|p| p.0 == b).map(|p| p.1)
    }
}

/// A single branch shifted horizontally, used to study one side of a shape
/// in the first quadrant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TranslatedBranch {
    pub curve: LimitCurve,
    pub branch: Branch,
    pub shift: f64,
}

impl TranslatedBranch {
    /// Left cap of `f_d` moved so its foot sits at the origin.
    pub fn strong_left() -> Self {
        let curve = LimitCurve::new(CurveFamily::Strong);
        curve.translated(Branch::Left, curve.cap_width())
    }

    /// Left tail of `f_s` moved so that height `eps` is reached at the
    /// origin.
    pub fn unrestricted_left(eps: f64) -> Result<Self> {
        let curve = LimitCurve::new(CurveFamily::Unrestricted);
        let x = curve.inverse(Branch::Left, eps)?;
        Ok(curve.translated(Branch::Left, -x))
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let u = x - self.shift;
        if self.curve.branch_of(u)? != self.branch {
            return Err(Error::Domain {
                curve: self.curve.name(),
                x,
            });
        }
        self.curve.eval(u)
    }

    pub fn inverse(&self, y: f64) -> Result<f64> {
        Ok(self.curve.inverse(self.branch, y)? + self.shift)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub family: CurveFamily,
    pub branch: Branch,
    pub x: f64,
    pub y: f64,
}

pub fn write_curve_csv<W: Write>(points: &[CurvePoint], mut w: W) -> std::io::Result<()> {
    writeln!(w, "family,branch,x,y")?;
    for p in points {
        writeln!(w, "{},{},{},{}", p.family, p.branch, p.x, p.y)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NeighborhoodSpec {
    epsilon: f64,
}

impl NeighborhoodSpec {
    pub fn new(epsilon: f64) -> Result<Self> {
        if epsilon > 0.0 && epsilon.is_finite() {
            Ok(Self { epsilon })
        } else {
            Err(Error::validation(format!("epsilon must be positive, got {epsilon}")))
        }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// What places a vertex inside the neighbourhood.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Cover {
    XAxis,
    YAxis,
    Curve(Branch),
    Outside,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VertexCheck {
    pub class: VertexClass,
    pub x: f64,
    pub y: f64,
    /// Smallest horizontal distance to any branch.
    pub distance: f64,
    pub cover: Cover,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NeighborhoodReport {
    pub contained: bool,
    pub vertices: Vec<VertexCheck>,
}

impl NeighborhoodReport {
    pub fn outside(&self) -> impl Iterator<Item = &VertexCheck> {
        self.vertices.iter().filter(|v| v.cover == Cover::Outside)
    }
}

impl LimitCurve {
    /// Horizontal distance from `(x, y)` to the nearest branch, with the
    /// branch attaining it. Heights outside a branch's range measure to the
    /// asymptote `x = 0`.
    pub fn horizontal_distance(&self, x: f64, y: f64) -> (f64, Branch) {
        self.branches()
            .iter()
            .map(|&b| {
                let d = match self.inverse(b, y) {
                    Ok(xb) => (x - xb).abs(),
                    Err(_) => x.abs(),
                };
                (d, b)
            })
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .expect("every curve has a branch")
    }

    /// Whether every vertex lies within `ε` of an axis or, horizontally, of
    /// the curve. Strips are closed.
    pub fn in_neighborhood(&self, vertices: &VertexSet, spec: NeighborhoodSpec) -> NeighborhoodReport {
        let eps = spec.epsilon();
        let checks: Vec<VertexCheck> = vertices
            .classified()
            .map(|(class, v)| {
                let (x, y) = vertices.to_point(v);
                let (distance, branch) = self.horizontal_distance(x, y);
                let cover = if y.abs() <= eps {
                    Cover::XAxis
                } else if x.abs() <= eps {
                    Cover::YAxis
                } else if distance <= eps {
                    Cover::Curve(branch)
                } else {
                    Cover::Outside
                };
                VertexCheck {
                    class,
                    x,
                    y,
                    distance,
                    cover,
                }
            })
            .collect();
        NeighborhoodReport {
            contained: checks.iter().all(|c| c.cover != Cover::Outside),
            vertices: checks,
        }
    }
}

pub fn curve_eval(curve: &LimitCurve, x: f64) -> Result<f64> {
    curve.eval(x)
}

pub fn curve_inverse(curve: &LimitCurve, branch: Branch, y: f64) -> Result<f64> {
    curve.inverse(branch, y)
}

pub fn in_neighborhood(vertices: &VertexSet, curve: &LimitCurve, spec: NeighborhoodSpec) -> NeighborhoodReport {
    curve.in_neighborhood(vertices, spec)
}
