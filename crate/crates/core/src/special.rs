//! Real dilogarithm.

use std::f64::consts::PI;

const PI2_6: f64 = PI * PI / 6.0;

/// `Σ z^k / k²` for `|z| ≤ 1/2`.
fn li2_series(z: f64) -> f64 {
    let mut term = z;
    let mut sum = 0.0f64;
    let mut k = 1.0f64;
    while term.abs() > 1e-18 * sum.abs().max(1e-300) {
        sum += term / (k * k);
        term *= z;
        k += 1.0;
        if k > 200.0 {
            break;
        }
    }
    sum
}

/// `Li₂(z)` for real `z ≤ 1`; NaN above 1.
///
/// Uses the power series on `[-1/2, 1/2]`, the reflection
/// `Li₂(z) = π²/6 - ln z ln(1-z) - Li₂(1-z)` on `(1/2, 1)`, and the Landen
/// identity `Li₂(z) = -Li₂(z/(z-1)) - ½ ln²(1-z)` for `z < -1/2`.
pub fn dilog(z: f64) -> f64 {
    if z.is_nan() || z > 1.0 {
        return f64::NAN;
    }
    if z == 1.0 {
        return PI2_6;
    }
    if z > 0.5 {
        return PI2_6 - z.ln() * (-z).ln_1p() - li2_series(1.0 - z);
    }
    if z >= -0.5 {
        return li2_series(z);
    }
    let l = (-z).ln_1p();
    -dilog(z / (z - 1.0)) - 0.5 * l * l
}

/// Root of `f` on `[a, b]` by bisection; `f(a)` and `f(b)` must differ in
/// sign. Returns `None` when they do not.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> Option<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return None;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= tol || m == a || m == b {
            return Some(m);
        }
        let fm = f(m);
        if fm == 0.0 {
            return Some(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
        assert!(bisect(|x| x * x + 1.0, 0.0, 2.0, 1e-14).is_none());
    }

    /// Direct quadrature of `-ln(1-t)/t` on `[0, z]` by composite Simpson,
    /// with the substitution `t = z s²` to tame the endpoint behaviour.
    fn li2_integral(z: f64) -> f64 {
        let n = 20_000;
        let f = |s: f64| {
            if s == 0.0 {
                return 0.0;
            }
            let t = z * s * s;
            -(-t).ln_1p() / t * 2.0 * z * s
        };
        let h = 1.0 / n as f64;
        let mut acc = f(0.0) + f(1.0 - 1e-15);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(i as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn anchors() {
        assert_eq!(dilog(0.0), 0.0);
        assert!((dilog(1.0) - PI * PI / 6.0).abs() < 1e-15);
        assert!((dilog(-1.0) + PI * PI / 12.0).abs() < 1e-14);
        let half = PI * PI / 12.0 - 0.5 * 2f64.ln().powi(2);
        assert!((dilog(0.5) - half).abs() < 1e-15);
        assert!(dilog(1.5).is_nan());
    }

    #[test]
    fn agrees_with_integral_definition() {
        for z in [-20.0, -3.0, -1.0, -0.7, -0.2, 0.1, 0.45, 0.6, 0.9, 0.999] {
            let want = li2_integral(z);
            assert!((dilog(z) - want).abs() < 1e-9 * want.abs().max(1.0), "z = {z}: {} vs {want}", dilog(z));
        }
    }

    #[test]
    fn continuity_across_branches() {
        for z in [-0.5f64, 0.5] {
            let (a, b) = (dilog(z - 1e-12), dilog(z + 1e-12));
            assert!((a - b).abs() < 1e-11);
        }
    }
}
