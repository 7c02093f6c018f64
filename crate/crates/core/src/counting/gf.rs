//! Coefficients from the product/sum forms of the generating functions,
//! computed by truncated polynomial arithmetic. Shares nothing with the
//! table-based counts, which makes it a cross-check.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::Family;

/// Multiply a truncated series by `1/(1 - q^j)` in place.
fn divide_by_one_minus(poly: &mut [BigUint], j: usize) {
    for i in j..poly.len() {
        let (lo, hi) = poly.split_at_mut(i);
        hi[0] += &lo[i - j];
    }
}

/// Multiply a truncated series by `1 + q^j` in place.
fn multiply_by_one_plus(poly: &mut [BigUint], j: usize) {
    for i in (j..poly.len()).rev() {
        let (lo, hi) = poly.split_at_mut(i);
        hi[0] += &lo[i - j];
    }
}

/// `Σ_{m≥0} q^{m+1} Π_{j=1}^{m} (1+q^j)^2`.
fn strong(max_n: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); max_n + 1];
    let mut prod = vec![BigUint::zero(); max_n + 1];
    prod[0] = BigUint::from(1u32);
    for m in 0..max_n {
        if m > 0 {
            multiply_by_one_plus(&mut prod, m);
            multiply_by_one_plus(&mut prod, m);
        }
        for (i, c) in prod[..max_n - m].iter().enumerate() {
            out[i + m + 1] += c;
        }
    }
    out
}

/// `Π_{m≥1} (1-q^m)^{-2} · L(q)` with `L(q) = Σ_{m≥1} (-1)^{m+1} q^{m(m+1)/2}`.
fn unrestricted(max_n: usize) -> Result<Vec<BigUint>> {
    let mut inv = vec![BigUint::zero(); max_n + 1];
    inv[0] = BigUint::from(1u32);
    for j in 1..=max_n {
        divide_by_one_minus(&mut inv, j);
        divide_by_one_minus(&mut inv, j);
    }
    let triangular: Vec<(usize, bool)> = (1..)
        .map(|m: usize| (m * (m + 1) / 2, m % 2 == 1))
        .take_while(|&(t, _)| t <= max_n)
        .collect();
    (0..=max_n)
        .map(|n| {
            let (mut pos, mut neg) = (BigUint::zero(), BigUint::zero());
            for &(t, plus) in triangular.iter().take_while(|&&(t, _)| t <= n) {
                if plus {
                    pos += &inv[n - t];
                } else {
                    neg += &inv[n - t];
                }
            }
            if pos < neg {
                return Err(Error::SolverFailure(format!("negative coefficient at q^{n}")));
            }
            Ok(pos - neg)
        })
        .collect()
}

/// `Π_{j≥1} (1+q^j)/(1-q^j)`.
fn overpartition(max_n: usize) -> Vec<BigUint> {
    let mut poly = vec![BigUint::zero(); max_n + 1];
    poly[0] = BigUint::from(1u32);
    for j in 1..=max_n {
        multiply_by_one_plus(&mut poly, j);
    }
    for j in 1..=max_n {
        divide_by_one_minus(&mut poly, j);
    }
    poly
}

/// `Σ dm(n) q^n = q/(1+q) · Π (1+q^j)/(1-q^j)`, i.e.
/// `dm(n) = pbar(n-1) - dm(n-1)`.
fn semi_strict(max_n: usize) -> Result<Vec<BigUint>> {
    let pbar = overpartition(max_n);
    let mut out = vec![BigUint::zero(); max_n + 1];
    for n in 1..=max_n {
        if pbar[n - 1] < out[n - 1] {
            return Err(Error::SolverFailure(format!("negative coefficient at q^{n}")));
        }
        out[n] = &pbar[n - 1] - &out[n - 1];
    }
    Ok(out)
}

/// Coefficients `0..=max_n` of the family's generating function.
pub fn gf_coefficients(family: Family, max_n: usize) -> Result<Vec<BigUint>> {
    match family {
        Family::Strong => Ok(strong(max_n)),
        Family::Unrestricted => unrestricted(max_n),
        Family::SemiStrict => semi_strict(max_n),
        Family::Overpartition => Ok(overpartition(max_n)),
    }
}
