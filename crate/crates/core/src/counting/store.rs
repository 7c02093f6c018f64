//! Count values and the flat storage behind triangular tables.

use std::fmt::Debug;

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::Rng;

use crate::wide::Float192;

/// Arithmetic needed by the tables and the samplers.
///
/// Implemented exactly by [`BigUint`] and approximately by [`Float192`].
pub trait Weight: Clone + PartialOrd + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// A uniform draw from `[0, total)`. Choosing the first index whose
    /// running sum exceeds the threshold selects proportionally to weight.
    fn threshold<R: Rng + ?Sized>(rng: &mut R, total: &Self) -> Self;
    fn ln(&self) -> f64;
    /// A canonical byte encoding, used for checksums.
    fn to_bytes(&self) -> Vec<u8>;
}

impl Weight for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn threshold<R: Rng + ?Sized>(rng: &mut R, total: &Self) -> Self {
        rng.gen_biguint_below(total)
    }

    fn ln(&self) -> f64 {
        ln_biguint(self)
    }

    fn to_bytes(&self) -> Vec<u8> {
        self.to_bytes_le()
    }
}

impl Weight for Float192 {
    fn zero() -> Self {
        Float192::ZERO
    }

    fn one() -> Self {
        Float192::one()
    }

    fn is_zero(&self) -> bool {
        Float192::is_zero(self)
    }

    fn add(&self, rhs: &Self) -> Self {
        Float192::add(self, rhs)
    }

    fn mul(&self, rhs: &Self) -> Self {
        Float192::mul(self, rhs)
    }

    fn threshold<R: Rng + ?Sized>(rng: &mut R, total: &Self) -> Self {
        let u = Float192::from_fraction_bits([rng.gen(), rng.gen(), rng.gen()]);
        u.mul(total)
    }

    fn ln(&self) -> f64 {
        Float192::ln(self)
    }

    fn to_bytes(&self) -> Vec<u8> {
        Float192::to_bytes(self)
    }
}

/// Natural logarithm of a big integer, accurate to double precision.
pub fn ln_biguint(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    let shift = bits.saturating_sub(64);
    let top = (v >> shift).iter_u64_digits().next().unwrap_or(0);
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Append-only cell storage addressed by a dense index.
pub trait CellStore: Send + Sync + Sized {
    type Value: Weight;

    fn with_capacity(cells: usize) -> Self;
    fn push(&mut self, v: &Self::Value);
    /// Append `cell(i) + cell(j)`.
    fn push_sum(&mut self, i: usize, j: usize);
    fn get(&self, i: usize) -> Self::Value;
    fn len(&self) -> usize;
    fn heap_bytes(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Rough bytes per cell for tables whose largest entry has `max_bits`.
    fn estimated_cell_bytes(max_bits: f64) -> usize;
}

/// Big integers packed back to back as 32-bit limbs.
///
/// Roughly half the footprint of a `Vec<BigUint>` for the table sizes used
/// here, and no per-cell allocation.
#[derive(Debug, Clone, Default)]
pub struct LimbArena {
    limbs: Vec<u32>,
    /// `offsets[i]..offsets[i + 1]` are the limbs of cell `i`.
    offsets: Vec<u32>,
}

impl LimbArena {
    pub fn limbs(&self, i: usize) -> &[u32] {
        &self.limbs[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    fn seal(&mut self) {
        let end = u32::try_from(self.limbs.len()).expect("limb arena exceeds 2^32 limbs");
        self.offsets.push(end);
    }
}

impl CellStore for LimbArena {
    type Value = BigUint;

    fn with_capacity(cells: usize) -> Self {
        let mut offsets = Vec::with_capacity(cells + 1);
        offsets.push(0);
        Self {
            limbs: Vec::with_capacity(cells * 2),
            offsets,
        }
    }

    fn push(&mut self, v: &BigUint) {
        self.limbs.extend(v.iter_u32_digits());
        self.seal();
    }

    fn push_sum(&mut self, i: usize, j: usize) {
        let (ra, rb) = (self.offsets[i] as usize..self.offsets[i + 1] as usize, self.offsets[j] as usize..self.offsets[j + 1] as usize);
        let start = self.limbs.len();
        let width = ra.len().max(rb.len());
        self.limbs.resize(start + width + 1, 0);
        let (old, new) = self.limbs.split_at_mut(start);
        let (a, b) = (&old[ra], &old[rb]);
        let mut carry = 0u64;
        for (k, out) in new.iter_mut().enumerate().take(width) {
            let s = u64::from(a.get(k).copied().unwrap_or(0))
                + u64::from(b.get(k).copied().unwrap_or(0))
                + carry;
            *out = s as u32;
            carry = s >> 32;
        }
        if carry == 0 {
            self.limbs.pop();
        } else {
            new[width] = carry as u32;
        }
        self.seal();
    }

    fn get(&self, i: usize) -> BigUint {
        BigUint::from_slice(self.limbs(i))
    }

    fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    fn heap_bytes(&self) -> usize {
        4 * (self.limbs.capacity() + self.offsets.capacity())
    }

    fn estimated_cell_bytes(max_bits: f64) -> usize {
        4 + 4 * ((max_bits / 32.0).ceil() as usize + 1)
    }
}

/// Fixed-width approximate cells for high-precision mode.
#[derive(Debug, Clone, Default)]
pub struct WideStore {
    cells: Vec<Float192>,
}

impl CellStore for WideStore {
    type Value = Float192;

    fn with_capacity(cells: usize) -> Self {
        Self {
            cells: Vec::with_capacity(cells),
        }
    }

    fn push(&mut self, v: &Float192) {
        self.cells.push(*v);
    }

    fn push_sum(&mut self, i: usize, j: usize) {
        let s = self.cells[i].add(&self.cells[j]);
        self.cells.push(s);
    }

    fn get(&self, i: usize) -> Float192 {
        self.cells[i]
    }

    fn len(&self) -> usize {
        self.cells.len()
    }

    fn heap_bytes(&self) -> usize {
        self.cells.capacity() * std::mem::size_of::<Float192>()
    }

    fn estimated_cell_bytes(_max_bits: f64) -> usize {
        std::mem::size_of::<Float192>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arena_sums_with_carries() {
        let mut a = LimbArena::with_capacity(4);
        let x = BigUint::from(u32::MAX) * BigUint::from(u32::MAX);
        a.push(&x);
        a.push(&BigUint::from(1u32));
        a.push(&BigUint::default());
        a.push_sum(0, 1);
        a.push_sum(0, 0);
        a.push_sum(2, 1);
        assert_eq!(a.get(3), &x + 1u32);
        assert_eq!(a.get(4), &x * 2u32);
        assert_eq!(a.get(5), BigUint::from(1u32));
        assert_eq!(a.len(), 6);
        assert!(a.limbs(2).is_empty());
    }

    #[test]
    fn ln_of_big_values() {
        let v = BigUint::from(10u32).pow(100);
        assert!((ln_biguint(&v) - 100.0 * 10f64.ln()).abs() < 1e-10);
        assert!((ln_biguint(&BigUint::from(7u32)) - 7f64.ln()).abs() < 1e-15);
    }
}
