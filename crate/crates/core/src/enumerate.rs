//! Exhaustive enumerators. Used as oracles for counting, sampling and the
//! bijection, so they rely on nothing but the family definitions.

use crate::error::{Error, Result};
use crate::model::{Family, Overpartition, UnimodalSequence};

/// Largest sizes the exhaustive enumerators accept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub unimodal: usize,
    pub overpartition: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        Self {
            unimodal: 30,
            overpartition: 25,
        }
    }
}

/// Every member of a unimodal family of size `n`, in lexicographic order.
pub fn enumerate_family(family: Family, n: usize) -> Result<Vec<UnimodalSequence>> {
    enumerate_family_with(family, n, EnumerationLimits::default())
}

pub fn enumerate_family_with(
    family: Family,
    n: usize,
    limits: EnumerationLimits,
) -> Result<Vec<UnimodalSequence>> {
    if family == Family::Overpartition {
        return Err(Error::validation(
            "use enumerate_overpartitions for overpartitions",
        ));
    }
    if n > limits.unimodal {
        return Err(Error::BoundExceeded {
            n,
            bound: limits.unimodal,
        });
    }
    let mut out = Vec::new();
    if n > 0 {
        let mut prefix = Vec::with_capacity(n);
        unimodal_dfs(family, n as u32, &mut prefix, false, &mut out);
    }
    Ok(out)
}

fn unimodal_dfs(
    family: Family,
    remaining: u32,
    prefix: &mut Vec<u32>,
    falling: bool,
    out: &mut Vec<UnimodalSequence>,
) {
    if remaining == 0 {
        out.push(UnimodalSequence::from_parts_unchecked(prefix.clone()));
        return;
    }
    let last = prefix.last().copied();
    for v in 1..=remaining {
        let next_falling = match (last, falling) {
            (None, _) => false,
            (Some(l), false) => {
                if v > l {
                    false
                } else if v == l {
                    // A repeated value while rising is only allowed without
                    // strictness on the left.
                    if family != Family::Unrestricted {
                        continue;
                    }
                    false
                } else {
                    true
                }
            }
            (Some(l), true) => {
                if v > l || (v == l && family == Family::Strong) {
                    continue;
                }
                true
            }
        };
        prefix.push(v);
        unimodal_dfs(family, remaining - v, prefix, next_falling, out);
        prefix.pop();
    }
}

/// Every overpartition of `n`, ordered by part list then marks.
pub fn enumerate_overpartitions(n: usize) -> Result<Vec<Overpartition>> {
    enumerate_overpartitions_with(n, EnumerationLimits::default())
}

pub fn enumerate_overpartitions_with(
    n: usize,
    limits: EnumerationLimits,
) -> Result<Vec<Overpartition>> {
    if n > limits.overpartition {
        return Err(Error::BoundExceeded {
            n,
            bound: limits.overpartition,
        });
    }
    let mut partitions = Vec::new();
    partition_dfs(n as u32, n as u32, &mut Vec::new(), &mut partitions);

    let mut out = Vec::new();
    for parts in partitions {
        let lasts: Vec<usize> = (0..parts.len())
            .filter(|&i| parts.get(i + 1) != Some(&parts[i]))
            .collect();
        let d = lasts.len();
        for mask in 0u64..(1u64 << d) {
            let mut marked = vec![false; parts.len()];
            for (i, &pos) in lasts.iter().enumerate() {
                marked[pos] = (mask >> (d - 1 - i)) & 1 == 1;
            }
            out.push(Overpartition::new(parts.clone(), marked).expect("canonical marks"));
        }
    }
    Ok(out)
}

/// Partitions of `remaining` with parts at most `cap`, lexicographic.
fn partition_dfs(remaining: u32, cap: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if remaining == 0 {
        out.push(prefix.clone());
        return;
    }
    for v in 1..=remaining.min(cap) {
        prefix.push(v);
        partition_dfs(remaining - v, v, prefix, out);
        prefix.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::classify;

    fn lists(family: Family, n: usize) -> Vec<Vec<u32>> {
        enumerate_family(family, n)
            .unwrap()
            .into_iter()
            .map(|s| s.parts().to_vec())
            .collect()
    }

    #[test]
    fn unrestricted_size_four() {
        let got = lists(Family::Unrestricted, 4);
        let mut want = vec![
            vec![1, 1, 1, 1],
            vec![1, 1, 2],
            vec![1, 2, 1],
            vec![2, 1, 1],
            vec![2, 2],
            vec![1, 3],
            vec![3, 1],
            vec![4],
        ];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn strong_size_four() {
        assert_eq!(
            lists(Family::Strong, 4),
            vec![vec![1, 2, 1], vec![1, 3], vec![3, 1], vec![4]]
        );
    }

    /// Filter every composition of n; independent of the DFS rules.
    fn by_composition_filter(family: Family, n: usize) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        for mask in 0u32..(1 << (n - 1)) {
            let mut parts = Vec::new();
            let mut run = 1;
            for i in 0..n - 1 {
                if mask >> i & 1 == 1 {
                    parts.push(run);
                    run = 1;
                } else {
                    run += 1;
                }
            }
            parts.push(run);
            if classify(&parts).unwrap().contains(family) {
                out.push(parts);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn matches_composition_filter() {
        for family in Family::UNIMODAL {
            for n in 1..=12 {
                assert_eq!(lists(family, n), by_composition_filter(family, n), "{family} {n}");
            }
        }
    }

    #[test]
    fn overpartitions_of_three() {
        let all = enumerate_overpartitions(3).unwrap();
        assert_eq!(all.len(), 8);
        let shown: Vec<String> = all.iter().map(|o| o.to_string()).collect();
        assert_eq!(
            shown,
            ["(1,1,1)", "(1,1,1')", "(2,1)", "(2,1')", "(2',1)", "(2',1')", "(3)", "(3')"]
        );
        assert_eq!(enumerate_overpartitions(0).unwrap(), vec![Overpartition::empty()]);
    }

    #[test]
    fn bounds_are_enforced() {
        assert!(matches!(
            enumerate_family(Family::Strong, 31),
            Err(Error::BoundExceeded { n: 31, bound: 30 })
        ));
        assert!(enumerate_overpartitions(26).is_err());
        assert!(enumerate_family(Family::Unrestricted, 0).unwrap().is_empty());
    }
}
