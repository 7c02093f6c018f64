//! Generating functions near `q = 1`, saddle-point bounds, the functions
//! `α(t)` and `H(t)`, and leading-order growth of the counts.
//!
//! Everything is returned on a natural-log scale.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;

use num_bigint::BigUint;
use serde::Serialize;

use crate::counting::ln_biguint;
use crate::error::{Error, Result};
use crate::model::Family;
use crate::special::{bisect, dilog};

/// Generating functions available to [`gf_eval`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GfKind {
    /// `Σ_{m≥1} q^m Π_{j<m} (1+q^j)²`.
    D,
    /// `L(q) / Π_{m≥1} (1-q^m)²`.
    S,
    /// `Σ_{m≥1} q^m Π_{j<m} (1+q^j)/(1-q^j)`.
    Dm,
    /// `Σ_{m≥1} (-1)^{m+1} q^{m(m+1)/2}`.
    L,
    /// `Π_{j≥1} (1+q^j)/(1-q^j)`.
    OverProduct,
}

impl GfKind {
    pub fn of(family: Family) -> Self {
        match family {
            Family::Strong => GfKind::D,
            Family::Unrestricted => GfKind::S,
            Family::SemiStrict => GfKind::Dm,
            Family::Overpartition => GfKind::OverProduct,
        }
    }
}

/// Truncation rule for the series and products.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesOptions {
    /// Stop once the remaining terms are below this fraction of the sum.
    pub rel_tol: f64,
    pub term_budget: usize,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-30,
            term_budget: 10_000_000,
        }
    }
}

/// `ln F(e^{-t})` with default truncation.
pub fn gf_eval(kind: GfKind, t: f64) -> Result<f64> {
    gf_eval_with(kind, t, SeriesOptions::default())
}

pub fn gf_eval_with(kind: GfKind, t: f64, opts: SeriesOptions) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::validation(format!("t must be positive, got {t}")));
    }
    match kind {
        GfKind::D => peak_series(t, opts, |x| 2.0 * x.ln_1p()),
        GfKind::Dm => peak_series(t, opts, |x| x.ln_1p() - (-x).ln_1p()),
        GfKind::OverProduct => log_product(t, opts, |x| x.ln_1p() - (-x).ln_1p()),
        GfKind::L => Ok(alternating_l(t, opts)?.ln()),
        GfKind::S => {
            let l = alternating_l(t, opts)?;
            Ok(l.ln() + log_product(t, opts, |x| -2.0 * (-x).ln_1p())?)
        }
    }
}

/// `Σ_j g(q^j)` for `j ≥ 1`, where `g(x) = O(x)`.
fn log_product(t: f64, opts: SeriesOptions, g: impl Fn(f64) -> f64) -> Result<f64> {
    let q = (-t).exp();
    let mut sum = 0.0;
    let mut x = q;
    for _ in 0..opts.term_budget {
        let term = g(x);
        sum += term;
        // remaining terms are at most term·x/(1-q)
        let tail = term.abs() * x / -(-t).exp_m1();
        if tail <= opts.rel_tol * sum.abs() || x == 0.0 {
            return Ok(sum);
        }
        x *= q;
    }
    Err(Error::Nonconvergence {
        terms: opts.term_budget,
    })
}

/// `ln Σ_{m≥1} q^m exp(Σ_{j<m} g(q^j))`, summed by log-sum-exp.
fn peak_series(t: f64, opts: SeriesOptions, g: impl Fn(f64) -> f64) -> Result<f64> {
    let q = (-t).exp();
    let mut inner = 0.0;
    let mut qm = q;
    let mut log_sum = f64::NEG_INFINITY;
    for m in 1..=opts.term_budget {
        let log_term = -(m as f64) * t + inner;
        log_sum = log_add(log_sum, log_term);
        let step = g(qm);
        inner += step;
        qm *= q;
        // once the term ratio e^{step - t} drops below one the tail is
        // bounded by a geometric series
        let ratio = (step - t).exp();
        if ratio < 1.0 {
            let log_tail = log_term + step - t - (-(step - t).exp_m1()).ln();
            if log_tail - log_sum < opts.rel_tol.ln() {
                return Ok(log_sum);
            }
        }
    }
    Err(Error::Nonconvergence {
        terms: opts.term_budget,
    })
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

fn alternating_l(t: f64, opts: SeriesOptions) -> Result<f64> {
    let mut sum = 0.0;
    for m in 1..=opts.term_budget {
        let mf = m as f64;
        let term = (-t * mf * (mf + 1.0) / 2.0).exp();
        sum += if m % 2 == 1 { term } else { -term };
        let next = (-t * (mf + 1.0) * (mf + 2.0) / 2.0).exp();
        if next <= opts.rel_tol * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::Nonconvergence {
        terms: opts.term_budget,
    })
}

/// Saddle-point constants of a sequence family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SaddleSpec {
    pub family: Family,
    /// Leading coefficient of `t·ln F(e^{-t})` as `t → 0`.
    pub kappa: f64,
    pub c: f64,
    /// Growth constant: `ln count ~ A √n`.
    pub growth: f64,
}

impl SaddleSpec {
    pub fn new(family: Family) -> Result<Self> {
        let kappa = match family {
            Family::Strong => PI * PI / 6.0,
            Family::Unrestricted => PI * PI / 3.0,
            Family::SemiStrict => PI * PI / 4.0,
            Family::Overpartition => {
                return Err(Error::validation("saddle constants cover s, d and dm only"))
            }
        };
        let c = kappa.sqrt();
        Ok(Self {
            family,
            kappa,
            c,
            growth: 2.0 * c,
        })
    }

    /// `c + κ/c`, minimised at the chosen `c`.
    pub fn objective(&self, c: f64) -> f64 {
        c + self.kappa / c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SaddleReport {
    pub family: Family,
    pub n: u64,
    /// `t = c/√n`, so that `q = e^{-t}`.
    pub t: f64,
    /// `ln(q^{-n} F(q))`.
    pub log_bound: f64,
    /// `ln(q^{-n} F(q)) / (A√n)`.
    pub ratio: f64,
    /// `ln(count) / (A√n)` when the count was supplied.
    pub count_ratio: Option<f64>,
    /// `ln(count) ≤ ln(q^{-n} F(q))`.
    pub bound_holds: Option<bool>,
}

pub fn saddle_check(family: Family, n: u64, exact: Option<&BigUint>) -> Result<SaddleReport> {
    if n == 0 {
        return Err(Error::validation("saddle check needs n ≥ 1"));
    }
    let spec = SaddleSpec::new(family)?;
    let root = (n as f64).sqrt();
    let t = spec.c / root;
    let log_bound = n as f64 * t + gf_eval(GfKind::of(family), t)?;
    let scale = spec.growth * root;
    let log_count = exact.map(ln_biguint);
    Ok(SaddleReport {
        family,
        n,
        t,
        log_bound,
        ratio: log_bound / scale,
        count_ratio: log_count.map(|l| l / scale),
        bound_holds: log_count.map(|l| l <= log_bound),
    })
}

const ALPHA_LIMIT: f64 = 1.282_549_830_161_864; // π/√6

/// The root in `(0, π/√6)` of `α² = Li₂(1 - e^{-tα})`, with `α(0) = 0`.
pub fn alpha(t: f64) -> Result<f64> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::validation(format!("alpha needs t ≥ 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let h = |a: f64| dilog(-(-t * a).exp_m1()) - a * a;
    // h(a) ≈ ta - a² near zero, so h is positive just inside (0, t)
    let lo = t / (2.0 * (1.0 + t * t / 2.0));
    if !(h(lo) > 0.0) {
        return Err(Error::SolverFailure(format!("alpha: no bracket at t = {t}")));
    }
    bisect(h, lo, ALPHA_LIMIT, 1e-16)
        .ok_or_else(|| Error::SolverFailure(format!("alpha: bisection failed at t = {t}")))
}

/// `H(t) = 2α(t) - t ln(1 - e^{-tα(t)})`.
pub fn romik_h(t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::validation(format!("H needs t > 0, got {t}")));
    }
    let a = alpha(t)?;
    Ok(2.0 * a - t * (-(-t * a).exp_m1()).ln())
}

/// `α'(t) = tα / (2(e^{tα} - 1) - t²)`.
pub fn alpha_prime(t: f64) -> Result<f64> {
    let a = alpha(t)?;
    Ok(t * a / (2.0 * (t * a).exp_m1() - t * t))
}

/// `H'(t) = -ln(1 - e^{-tα(t)})`.
pub fn romik_h_prime(t: f64) -> Result<f64> {
    let a = alpha(t)?;
    Ok(-(-(-t * a).exp_m1()).ln())
}

/// Leading-order growth of a family's count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticCount {
    pub family: Family,
    pub n: u64,
    /// Natural log of the estimate.
    pub log_value: f64,
    /// Whether the estimate includes the polynomial prefactor; for `d`
    /// only the exponential term is known.
    pub with_prefactor: bool,
}

impl AsymptoticCount {
    /// `count / estimate` (or the ratio of logs when no prefactor is known).
    pub fn compare(&self, exact: &BigUint) -> f64 {
        let l = ln_biguint(exact);
        if self.with_prefactor {
            (l - self.log_value).exp()
        } else {
            l / self.log_value
        }
    }
}

pub fn asymptotic_count(family: Family, n: u64) -> Result<AsymptoticCount> {
    if n == 0 {
        return Err(Error::validation("asymptotic count needs n ≥ 1"));
    }
    let nf = n as f64;
    let (log_value, with_prefactor) = match family {
        Family::Unrestricted => (
            2.0 * PI * (nf / 3.0).sqrt() - (8.0f64).ln() - 0.75 * 3f64.ln() - 1.25 * nf.ln(),
            true,
        ),
        Family::SemiStrict => (PI * nf.sqrt() - (16.0 * nf).ln(), true),
        Family::Strong => (2.0 * PI * (nf / 6.0).sqrt(), false),
        Family::Overpartition => {
            return Err(Error::validation("no asymptotic formula for overpartitions"))
        }
    };
    Ok(AsymptoticCount {
        family,
        n,
        log_value,
        with_prefactor,
    })
}

/// The argument of a diagnostic row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Argument {
    N(u64),
    T(f64),
}

impl fmt::Display for Argument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Argument::N(n) => write!(f, "n={n}"),
            Argument::T(t) => write!(f, "t={t}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticRow {
    pub family: String,
    pub argument: Argument,
    pub quantity: String,
    pub value: f64,
    pub reference: f64,
}

impl DiagnosticRow {
    pub fn ratio(&self) -> f64 {
        self.value / self.reference
    }
}

impl SaddleReport {
    pub fn rows(&self) -> Vec<DiagnosticRow> {
        let fam = self.family.short_name().to_string();
        let scale = SaddleSpec::new(self.family).map(|s| s.growth).unwrap_or(f64::NAN) * (self.n as f64).sqrt();
        let mut rows = vec![DiagnosticRow {
            family: fam.clone(),
            argument: Argument::N(self.n),
            quantity: "log_saddle_bound".into(),
            value: self.log_bound,
            reference: scale,
        }];
        if let Some(r) = self.count_ratio {
            rows.push(DiagnosticRow {
                family: fam,
                argument: Argument::N(self.n),
                quantity: "log_count".into(),
                value: r * scale,
                reference: scale,
            });
        }
        rows
    }
}

pub fn write_diagnostics_csv<W: Write>(rows: &[DiagnosticRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "family,argument,quantity,value,reference,ratio")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{:.12e},{:.12e},{:.12}",
            r.family,
            r.argument,
            r.quantity,
            r.value,
            r.reference,
            r.ratio()
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{count_family, gf_coefficients};

    /// `ln Σ a_k q^k` from exact coefficients, for large enough `t`.
    fn from_coefficients(family: Family, t: f64) -> f64 {
        let coeffs = gf_coefficients(family, 400).unwrap();
        let s: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| (ln_biguint(a) - k as f64 * t).exp())
            .filter(|v| v.is_finite())
            .sum();
        s.ln()
    }

    #[test]
    fn series_agree_with_coefficients() {
        for (kind, fam) in [
            (GfKind::D, Family::Strong),
            (GfKind::S, Family::Unrestricted),
            (GfKind::Dm, Family::SemiStrict),
            (GfKind::OverProduct, Family::Overpartition),
        ] {
            for t in [0.5, 1.0, 2.0] {
                let a = gf_eval(kind, t).unwrap();
                let b = from_coefficients(fam, t);
                assert!((a - b).abs() < 1e-10, "{kind:?} t={t}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn l_limits() {
        assert!((gf_eval(GfKind::L, 0.01).unwrap() - 0.5f64.ln()).abs() < 0.02);
        let v = gf_eval(GfKind::L, 5.0).unwrap();
        assert!((v + 5.0).abs() < 0.05);
    }

    #[test]
    fn d_approaches_its_exponent() {
        let k = PI * PI / 6.0;
        let gaps: Vec<f64> = [0.1, 0.05, 0.02, 0.01]
            .iter()
            .map(|&t| (t * gf_eval(GfKind::D, t).unwrap() - k).abs())
            .collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    }

    #[test]
    fn tiny_budget_reports_nonconvergence() {
        let opts = SeriesOptions {
            rel_tol: 1e-30,
            term_budget: 10,
        };
        assert_eq!(gf_eval_with(GfKind::D, 0.01, opts), Err(Error::Nonconvergence { terms: 10 }));
        assert!(gf_eval(GfKind::D, 0.0).is_err());
    }

    #[test]
    fn c_is_a_local_minimum() {
        for fam in Family::UNIMODAL {
            let s = SaddleSpec::new(fam).unwrap();
            let at = s.objective(s.c);
            assert!(s.objective(s.c - 0.01) > at);
            assert!(s.objective(s.c + 0.01) > at);
            assert!((s.growth - 2.0 * s.c).abs() < 1e-15);
        }
        assert!((SaddleSpec::new(Family::Strong).unwrap().c - PI / 6f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn saddle_bound_holds_on_exact_counts() {
        for fam in Family::UNIMODAL {
            for n in [1u64, 5, 40, 200] {
                let exact = count_family(fam, n as usize).unwrap();
                let r = saddle_check(fam, n, Some(&exact)).unwrap();
                assert_eq!(r.bound_holds, Some(true), "{fam} {n}");
            }
        }
    }

    #[test]
    fn strong_ratio_tends_to_one() {
        let r: Vec<f64> = [100u64, 1000, 10_000]
            .iter()
            .map(|&n| saddle_check(Family::Strong, n, None).unwrap().ratio)
            .collect();
        assert!(r.windows(2).all(|w| (w[1] - 1.0).abs() < (w[0] - 1.0).abs()), "{r:?}");
        assert!((0.95..=1.05).contains(&r[2]));
    }

    #[test]
    fn alpha_properties() {
        assert_eq!(alpha(0.0).unwrap(), 0.0);
        let grid: Vec<f64> = (1..=100).map(|i| i as f64 * 0.1).collect();
        let mut prev = 0.0;
        for &t in &grid {
            let a = alpha(t).unwrap();
            let resid = a * a - dilog(1.0 - (-t * a).exp());
            assert!(resid.abs() < 1e-12, "t={t} resid={resid}");
            assert!(a > prev);
            assert!(t * t / ((t * a).exp() - 1.0) < 1.0);
            prev = a;
        }
        assert!((alpha(10.0).unwrap() - PI / 6f64.sqrt()).abs() < 1e-3);
        assert!((ALPHA_LIMIT - PI / 6f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn h_properties() {
        let hs: Vec<f64> = (1..=100).map(|i| romik_h(i as f64 * 0.1).unwrap()).collect();
        assert!(hs.windows(2).all(|w| w[1] > w[0]));
        assert!((romik_h(10.0).unwrap() - PI * (2.0f64 / 3.0).sqrt()).abs() < 1e-3);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for t in [0.3, 1.0, 2.0, 4.0] {
            let h = 1e-4;
            let da = (alpha(t + h).unwrap() - alpha(t - h).unwrap()) / (2.0 * h);
            let exact = alpha_prime(t).unwrap();
            assert!(((da - exact) / exact).abs() < 1e-4, "alpha' t={t}");
        }
        for t in [1.0, 2.0, 4.0] {
            let h = 1e-4;
            let dh = (romik_h(t + h).unwrap() - romik_h(t - h).unwrap()) / (2.0 * h);
            let exact = romik_h_prime(t).unwrap();
            assert!(((dh - exact) / exact).abs() < 1e-5, "H' t={t}");
        }
    }

    #[test]
    fn asymptotic_counts_at_moderate_n() {
        // ln d(500), from an independent power-series expansion
        let d500: BigUint = "6043200525431801788521".parse().unwrap();
        let est = asymptotic_count(Family::Strong, 500).unwrap();
        assert!(!est.with_prefactor);
        assert!((0.8..1.1).contains(&est.compare(&d500)));
        assert!(asymptotic_count(Family::Overpartition, 5).is_err());
    }

    #[test]
    fn csv_rows() {
        let r = saddle_check(Family::SemiStrict, 50, Some(&count_family(Family::SemiStrict, 50).unwrap())).unwrap();
        let mut buf = Vec::new();
        write_diagnostics_csv(&r.rows(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.lines().nth(1).unwrap().starts_with("dm,n=50,log_saddle_bound,"));
    }
}
