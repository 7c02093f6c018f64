//! A 192-bit-mantissa binary float for approximate counts.
//!
//! Values are `mant * 2^exp` with the top bit of `mant` set (or all zero).
//! Addition and multiplication truncate, so every operation has relative
//! error below `2^-191`.

use std::cmp::Ordering;

use num_bigint::BigUint;

const LIMBS: usize = 3;
const BITS: i64 = 64 * LIMBS as i64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Float192 {
    /// Little-endian limbs.
    mant: [u64; LIMBS],
    exp: i64,
}

impl Float192 {
    pub const ZERO: Float192 = Float192 {
        mant: [0; LIMBS],
        exp: 0,
    };

    pub fn one() -> Self {
        Self::from_u64(1)
    }

    pub fn from_u64(v: u64) -> Self {
        if v == 0 {
            return Self::ZERO;
        }
        let lz = v.leading_zeros();
        Float192 {
            mant: [0, 0, v << lz],
            exp: -(BITS - 64) - i64::from(lz),
        }
    }

    /// Round toward zero to 192 significant bits.
    pub fn from_biguint(v: &BigUint) -> Self {
        let bits = v.bits() as i64;
        if bits == 0 {
            return Self::ZERO;
        }
        let shift = bits - BITS;
        let aligned = if shift >= 0 { v >> shift as u64 } else { v << (-shift) as u64 };
        let digits = aligned.to_u64_digits();
        let mut mant = [0u64; LIMBS];
        mant[..digits.len()].copy_from_slice(&digits);
        Float192 { mant, exp: shift }
    }

    /// `bits` uniform random bits interpreted as a fraction in `[0, 1)`.
    pub fn from_fraction_bits(bits: [u64; LIMBS]) -> Self {
        normalize_wide(&bits, -BITS)
    }

    /// Mantissa limbs then exponent, little-endian.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 * (LIMBS + 1));
        for limb in self.mant {
            out.extend_from_slice(&limb.to_le_bytes());
        }
        out.extend_from_slice(&self.exp.to_le_bytes());
        out
    }

    pub fn is_zero(&self) -> bool {
        self.mant[LIMBS - 1] == 0
    }

    /// `log2` of the value; `-inf` for zero.
    pub fn log2(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let top = self.mant[LIMBS - 1] as f64;
        top.log2() + (self.exp + BITS - 64) as f64
    }

    pub fn ln(&self) -> f64 {
        self.log2() * std::f64::consts::LN_2
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return *rhs;
        }
        if rhs.is_zero() {
            return *self;
        }
        let (big, small) = if self.exp >= rhs.exp { (self, rhs) } else { (rhs, self) };
        let d = big.exp - small.exp;
        if d >= BITS {
            return *big;
        }
        let shifted = shr(&small.mant, d as u32);
        let mut out = [0u64; LIMBS];
        let mut carry = 0u64;
        for i in 0..LIMBS {
            let (s1, c1) = big.mant[i].overflowing_add(shifted[i]);
            let (s2, c2) = s1.overflowing_add(carry);
            out[i] = s2;
            carry = u64::from(c1) + u64::from(c2);
        }
        if carry == 0 {
            Float192 { mant: out, exp: big.exp }
        } else {
            let mut m = shr(&out, 1);
            m[LIMBS - 1] |= 1 << 63;
            Float192 { mant: m, exp: big.exp + 1 }
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        let mut prod = [0u64; 2 * LIMBS];
        for i in 0..LIMBS {
            let mut carry = 0u128;
            for j in 0..LIMBS {
                let t = u128::from(self.mant[i]) * u128::from(rhs.mant[j])
                    + u128::from(prod[i + j])
                    + carry;
                prod[i + j] = t as u64;
                carry = t >> 64;
            }
            prod[i + LIMBS] = carry as u64;
        }
        normalize_wide(&prod, self.exp + rhs.exp)
    }
}

/// Normalize an arbitrary little-endian limb string times `2^exp`.
fn normalize_wide(limbs: &[u64], exp: i64) -> Float192 {
    let Some(top) = limbs.iter().rposition(|&l| l != 0) else {
        return Float192::ZERO;
    };
    let lz = limbs[top].leading_zeros() as i64;
    // Bit length of the value, then take the highest 192 bits.
    let bits = 64 * (top as i64 + 1) - lz;
    let drop = bits - BITS;
    let mut mant = [0u64; LIMBS];
    for (i, m) in mant.iter_mut().enumerate() {
        *m = extract_word(limbs, drop + 64 * i as i64);
    }
    Float192 { mant, exp: exp + drop }
}

/// The 64 bits of `limbs` starting at bit `start` (may be negative).
fn extract_word(limbs: &[u64], start: i64) -> u64 {
    let get = |idx: i64| -> u64 {
        if idx < 0 || idx as usize >= limbs.len() {
            0
        } else {
            limbs[idx as usize]
        }
    };
    let word = start.div_euclid(64);
    let off = start.rem_euclid(64) as u32;
    if off == 0 {
        get(word)
    } else {
        (get(word) >> off) | (get(word + 1) << (64 - off))
    }
}

fn shr(m: &[u64; LIMBS], s: u32) -> [u64; LIMBS] {
    let mut out = [0u64; LIMBS];
    for (i, o) in out.iter_mut().enumerate() {
        *o = extract_word(m, i as i64 * 64 + i64::from(s));
    }
    out
}

impl PartialOrd for Float192 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Float192 {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (false, false) => self
                .exp
                .cmp(&other.exp)
                .then_with(|| self.mant.iter().rev().cmp(other.mant.iter().rev())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    fn to_big(v: &Float192) -> (BigUint, i64) {
        let mut m = BigUint::default();
        for &l in v.mant.iter().rev() {
            m = (m << 64u32) + l;
        }
        (m, v.exp)
    }

    /// Exact value `m * 2^e` compared against a big integer, as a relative error.
    fn rel_err(v: &Float192, exact: &BigUint) -> f64 {
        let (m, e) = to_big(v);
        let approx = if e >= 0 { m << e as u64 } else { m >> (-e) as u64 };
        let diff = if &approx > exact { &approx - exact } else { exact - &approx };
        if diff.bits() == 0 {
            return 0.0;
        }
        2f64.powf(diff.bits() as f64 - exact.bits() as f64 + 1.0)
    }

    #[test]
    fn small_integers_are_exact() {
        let a = Float192::from_u64(12345);
        let b = Float192::from_u64(678);
        assert_eq!(a.add(&b), Float192::from_u64(13023));
        assert_eq!(a.mul(&b), Float192::from_u64(12345 * 678));
        assert_eq!(Float192::from_biguint(&BigUint::from(99u32)), Float192::from_u64(99));
        assert!(Float192::ZERO < Float192::one());
        assert!((Float192::from_u64(1024).log2() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn carries_propagate() {
        let a = Float192::from_u64(u64::MAX);
        assert_eq!(a.add(&Float192::one()), Float192::from_biguint(&(BigUint::one() << 64u32)));
    }

    proptest! {
        #[test]
        fn arithmetic_tracks_big_integers(a in any::<[u64; 5]>(), b in any::<[u64; 4]>()) {
            let big = |l: &[u64]| l.iter().rev().fold(BigUint::default(), |acc, &x| (acc << 64u32) + x);
            let (x, y) = (big(&a), big(&b));
            prop_assume!(x.bits() > 0 && y.bits() > 0);
            let (fx, fy) = (Float192::from_biguint(&x), Float192::from_biguint(&y));
            prop_assert!(rel_err(&fx.add(&fy), &(&x + &y)) < 2f64.powi(-188));
            prop_assert!(rel_err(&fx.mul(&fy), &(&x * &y)) < 2f64.powi(-188));
            let monotone = match x.cmp(&y) {
                std::cmp::Ordering::Less => fx <= fy,
                std::cmp::Ordering::Greater => fx >= fy,
                std::cmp::Ordering::Equal => fx == fy,
            };
            prop_assert!(monotone);
        }
    }
}
