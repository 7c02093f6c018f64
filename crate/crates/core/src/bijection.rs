//! Semi-strict unimodal sequences of size `n` or `n + 1` ↔ overpartitions
//! of `n`.
//!
//! From `D_m(n)`: mark the peak and every part left of it. From
//! `D_m(n+1)`: mark the parts left of the peak and lower the peak by one
//! (dropping it when it reaches zero). In both cases the parts are then
//! sorted into a weakly decreasing list.

use std::collections::HashSet;

use serde::Serialize;

use crate::enumerate::{enumerate_family, enumerate_overpartitions};
use crate::error::{Error, Result};
use crate::model::{Family, Overpartition, UnimodalSequence};

/// Largest `n` accepted by [`verify_exhaustive`].
pub const EXHAUSTIVE_LIMIT: usize = 12;

/// Which side of the correspondence a sequence comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BijectionCase {
    /// The sequence has the same size as the overpartition.
    A,
    /// The sequence is one larger than the overpartition.
    B,
}

impl BijectionCase {
    /// Size of the source sequence for an overpartition of `n`.
    pub fn source_size(self, n: u64) -> u64 {
        match self {
            BijectionCase::A => n,
            BijectionCase::B => n + 1,
        }
    }
}

pub fn dm_to_overpartition(seq: &UnimodalSequence, case: BijectionCase) -> Result<Overpartition> {
    if !seq.membership().semi_strict {
        return Err(Error::validation(format!("{seq} is not semi-strict")));
    }
    let peak = seq.peak_info().peak_value;
    let mut items: Vec<(u32, bool)> = Vec::with_capacity(seq.len());
    items.extend(seq.left_parts().iter().map(|&p| (p, true)));
    items.extend(seq.right_parts().iter().map(|&p| (p, false)));
    match case {
        BijectionCase::A => items.push((peak, true)),
        BijectionCase::B if peak > 1 => items.push((peak - 1, false)),
        BijectionCase::B => {}
    }
    Ok(Overpartition::from_multiset(items))
}

/// Inverse of [`dm_to_overpartition`].
///
/// Case A exactly when the largest value occurs once and is marked.
pub fn overpartition_to_dm(op: &Overpartition) -> (UnimodalSequence, BijectionCase) {
    let Some(&max) = op.parts().first() else {
        return (UnimodalSequence::from_parts_unchecked(vec![1]), BijectionCase::B);
    };
    let copies = op.parts().iter().take_while(|&&p| p == max).count();
    let case_a = copies == 1 && op.marked()[0];

    let mut left: Vec<u32> = Vec::new();
    let mut right: Vec<u32> = Vec::new();
    let mut peak_taken = false;
    for (p, marked) in op.iter() {
        if !peak_taken && p == max && (case_a || !marked) {
            peak_taken = true;
        } else if marked {
            left.push(p);
        } else {
            right.push(p);
        }
    }
    let peak = if case_a { max } else { max + 1 };
    left.reverse();
    let mut parts = left;
    parts.push(peak);
    parts.extend(right);
    let case = if case_a { BijectionCase::A } else { BijectionCase::B };
    (UnimodalSequence::from_parts_unchecked(parts), case)
}

/// Outcome of checking the correspondence on every object of one size.
#[derive(Debug, Clone, Serialize)]
pub struct BijectionReport {
    pub n: usize,
    pub dm_n: usize,
    pub dm_n1: usize,
    pub overpartitions: usize,
    /// No two sequences share an image.
    pub injective: bool,
    /// The images are exactly the overpartitions of `n`.
    pub image_matches: bool,
    /// Inverting every image recovers the sequence and its case.
    pub round_trip_clean: bool,
}

impl BijectionReport {
    pub fn is_ok(&self) -> bool {
        self.injective
            && self.image_matches
            && self.round_trip_clean
            && self.dm_n + self.dm_n1 == self.overpartitions
    }
}

/// Map every member of `D_m(n) ⊔ D_m(n+1)` and compare with the enumerated
/// overpartitions of `n`.
pub fn verify_exhaustive(n: usize) -> Result<BijectionReport> {
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::BoundExceeded {
            n,
            bound: EXHAUSTIVE_LIMIT,
        });
    }
    let from_n = if n == 0 { Vec::new() } else { enumerate_family(Family::SemiStrict, n)? };
    let from_n1 = enumerate_family(Family::SemiStrict, n + 1)?;
    let all_ops = enumerate_overpartitions(n)?;

    let mut images = HashSet::new();
    let mut injective = true;
    let mut round_trip_clean = true;
    let sources = from_n
        .iter()
        .map(|s| (s, BijectionCase::A))
        .chain(from_n1.iter().map(|s| (s, BijectionCase::B)));
    for (seq, case) in sources {
        let op = dm_to_overpartition(seq, case)?;
        if op.size() != n as u64 {
            round_trip_clean = false;
        }
        let (back, back_case) = overpartition_to_dm(&op);
        if &back != seq || back_case != case {
            round_trip_clean = false;
        }
        injective &= images.insert(op);
    }
    let expected: HashSet<Overpartition> = all_ops.iter().cloned().collect();
    Ok(BijectionReport {
        n,
        dm_n: from_n.len(),
        dm_n1: from_n1.len(),
        overpartitions: all_ops.len(),
        injective,
        image_matches: images == expected,
        round_trip_clean,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(parts: &[u32]) -> UnimodalSequence {
        UnimodalSequence::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn forward_examples() {
        let op = dm_to_overpartition(&seq(&[1, 2, 1]), BijectionCase::A).unwrap();
        assert_eq!(op.parts(), [2, 1, 1]);
        assert_eq!(op.marked(), [true, false, true]);
        assert_eq!(op.marked_weight(), 3);

        let op = dm_to_overpartition(&seq(&[1]), BijectionCase::B).unwrap();
        assert_eq!(op, Overpartition::empty());

        let op = dm_to_overpartition(&seq(&[1, 3, 2, 2]), BijectionCase::B).unwrap();
        assert_eq!(op.parts(), [2, 2, 2, 1]);
        assert_eq!(op.marked(), [false, false, false, true]);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(overpartition_to_dm(&Overpartition::empty()), (seq(&[1]), BijectionCase::B));
        let op = Overpartition::new(vec![2, 1, 1], vec![true, false, true]).unwrap();
        assert_eq!(overpartition_to_dm(&op), (seq(&[1, 2, 1]), BijectionCase::A));
        let op = Overpartition::new(vec![2, 2, 2, 1], vec![false, false, false, true]).unwrap();
        assert_eq!(overpartition_to_dm(&op), (seq(&[1, 3, 2, 2]), BijectionCase::B));
    }

    #[test]
    fn rejects_non_semi_strict() {
        assert!(dm_to_overpartition(&seq(&[2, 2]), BijectionCase::A).is_err());
    }

    #[test]
    fn marked_weights() {
        let none = Overpartition::new(vec![3, 1], vec![false, false]).unwrap();
        assert_eq!(none.marked_weight(), 0);
        let all = Overpartition::new(vec![3, 2, 1], vec![true; 3]).unwrap();
        assert_eq!(all.marked_weight(), 6);
    }

    #[test]
    fn exhaustive_small() {
        for n in 0..=8 {
            let r = verify_exhaustive(n).unwrap();
            assert!(r.is_ok(), "{r:?}");
        }
        assert!(verify_exhaustive(13).is_err());
    }

    #[test]
    fn case_a_preserves_size_case_b_drops_one() {
        for s in enumerate_family(Family::SemiStrict, 9).unwrap() {
            assert_eq!(dm_to_overpartition(&s, BijectionCase::A).unwrap().size(), 9);
            assert_eq!(dm_to_overpartition(&s, BijectionCase::B).unwrap().size(), 8);
        }
    }
}
