//! Sequences, overpartitions and family membership.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The combinatorial families handled by the toolkit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Weakly increasing then weakly decreasing; counted by `s(n)`.
    Unrestricted,
    /// Strictly increasing then strictly decreasing; counted by `d(n)`.
    Strong,
    /// Unique peak, strict increase to its left; counted by `dm(n)`.
    SemiStrict,
    /// Overpartitions; counted by `pbar(n)`.
    Overpartition,
}

impl Family {
    pub const UNIMODAL: [Family; 3] = [Family::Unrestricted, Family::Strong, Family::SemiStrict];
    pub const ALL: [Family; 4] = [
        Family::Unrestricted,
        Family::Strong,
        Family::SemiStrict,
        Family::Overpartition,
    ];

    /// Short name used in tables and on the command line.
    pub fn short_name(self) -> &'static str {
        match self {
            Family::Unrestricted => "s",
            Family::Strong => "d",
            Family::SemiStrict => "dm",
            Family::Overpartition => "pbar",
        }
    }

    pub fn is_unimodal(self) -> bool {
        self != Family::Overpartition
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s" | "unrestricted" | "st" => Ok(Family::Unrestricted),
            "d" | "strong" | "strongly" => Ok(Family::Strong),
            "dm" | "semistrict" | "semi-strict" | "semi_strict" => Ok(Family::SemiStrict),
            "pbar" | "p̄" | "overpartition" | "overpartitions" | "op" => Ok(Family::Overpartition),
            other => Err(Error::validation(format!("unknown family `{other}`"))),
        }
    }
}

/// Family memberships of a list of parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub unrestricted: bool,
    pub strong: bool,
    pub semi_strict: bool,
}

impl Membership {
    pub fn contains(&self, family: Family) -> bool {
        match family {
            Family::Unrestricted => self.unrestricted,
            Family::Strong => self.strong,
            Family::SemiStrict => self.semi_strict,
            Family::Overpartition => false,
        }
    }
}

fn check_parts(parts: &[u32]) -> Result<()> {
    if parts.is_empty() {
        return Err(Error::validation("a sequence needs at least one part"));
    }
    if let Some(pos) = parts.iter().position(|&p| p == 0) {
        return Err(Error::validation(format!("part {} is not positive", pos + 1)));
    }
    Ok(())
}

/// Index of the first maximal part.
fn leftmost_max(parts: &[u32]) -> usize {
    let max = *parts.iter().max().expect("nonempty");
    parts.iter().position(|&p| p == max).expect("max present")
}

/// Decide which unimodal families `parts` belongs to.
pub fn classify(parts: &[u32]) -> Result<Membership> {
    check_parts(parts)?;
    let k = leftmost_max(parts);
    let (left, right) = (&parts[..=k], &parts[k..]);

    let rises_weakly = left.windows(2).all(|w| w[0] <= w[1]);
    let rises_strictly = left.windows(2).all(|w| w[0] < w[1]);
    let falls_weakly = right.windows(2).all(|w| w[0] >= w[1]);
    let falls_strictly = right.windows(2).all(|w| w[0] > w[1]);
    // Left of the leftmost maximum everything is already smaller, so a
    // weak rise up to k is the full unimodality condition.
    let unrestricted = rises_weakly && falls_weakly;
    let unique_peak = right.get(1).is_none_or(|&next| next < parts[k]);

    Ok(Membership {
        unrestricted,
        strong: unrestricted && rises_strictly && falls_strictly,
        semi_strict: unrestricted && rises_strictly && unique_peak,
    })
}

/// A unimodal sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnimodalSequence {
    parts: Vec<u32>,
    size: u64,
}

/// Leftmost peak position (1-based), peak value and number of peaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PeakInfo {
    pub leftmost_peak_index: usize,
    pub peak_value: u32,
    pub multiplicity: usize,
}

impl UnimodalSequence {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if !classify(&parts)?.unrestricted {
            return Err(Error::validation(format!("{parts:?} is not unimodal")));
        }
        Ok(Self::from_parts_unchecked(parts))
    }

    /// Build a sequence and require membership in `family`.
    pub fn in_family(parts: Vec<u32>, family: Family) -> Result<Self> {
        if family == Family::Overpartition {
            return Err(Error::validation("overpartitions are not unimodal sequences"));
        }
        if !classify(&parts)?.contains(family) {
            return Err(Error::validation(format!("{parts:?} is not in family {family}")));
        }
        Ok(Self::from_parts_unchecked(parts))
    }

    pub(crate) fn from_parts_unchecked(parts: Vec<u32>) -> Self {
        let size = parts.iter().map(|&p| u64::from(p)).sum();
        Self { parts, size }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn membership(&self) -> Membership {
        classify(&self.parts).expect("validated on construction")
    }

    pub fn peak_info(&self) -> PeakInfo {
        let k = leftmost_max(&self.parts);
        let value = self.parts[k];
        let multiplicity = self.parts[k..].iter().take_while(|&&p| p == value).count();
        PeakInfo {
            leftmost_peak_index: k + 1,
            peak_value: value,
            multiplicity,
        }
    }

    /// Parts strictly left of the leftmost peak.
    pub fn left_parts(&self) -> &[u32] {
        &self.parts[..leftmost_max(&self.parts)]
    }

    /// Parts strictly right of the leftmost peak.
    pub fn right_parts(&self) -> &[u32] {
        &self.parts[leftmost_max(&self.parts) + 1..]
    }

    /// Number of parts right of the peak minus number of parts left of it.
    pub fn rank(&self) -> i64 {
        self.right_parts().len() as i64 - self.left_parts().len() as i64
    }
}

impl fmt::Display for UnimodalSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

pub fn peak_info(seq: &UnimodalSequence) -> PeakInfo {
    seq.peak_info()
}

/// A partition in which the last occurrence of each part value may be marked.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Overpartition {
    parts: Vec<u32>,
    marked: Vec<bool>,
    size: u64,
}

impl Overpartition {
    pub fn empty() -> Self {
        Self {
            parts: Vec::new(),
            marked: Vec::new(),
            size: 0,
        }
    }

    /// `parts` must be weakly decreasing and positive; a mark may only sit
    /// on the last occurrence of its value.
    pub fn new(parts: Vec<u32>, marked: Vec<bool>) -> Result<Self> {
        if parts.len() != marked.len() {
            return Err(Error::validation(format!(
                "{} parts but {} marked flags",
                parts.len(),
                marked.len()
            )));
        }
        if parts.contains(&0) {
            return Err(Error::validation("overpartition parts must be positive"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::validation(format!("{parts:?} is not weakly decreasing")));
        }
        for (i, &m) in marked.iter().enumerate() {
            if m && parts.get(i + 1) == Some(&parts[i]) {
                return Err(Error::validation(format!(
                    "mark on part {} is not on the last occurrence of {}",
                    i + 1,
                    parts[i]
                )));
            }
        }
        Ok(Self::from_parts_unchecked(parts, marked))
    }

    /// Build from an unordered multiset of `(value, marked)` pairs, at most
    /// one of which is marked per value.
    pub(crate) fn from_multiset(mut items: Vec<(u32, bool)>) -> Self {
        // Descending by value, unmarked copies first so the mark lands last.
        items.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let (parts, marked) = items.into_iter().unzip();
        Self::from_parts_unchecked(parts, marked)
    }

    fn from_parts_unchecked(parts: Vec<u32>, marked: Vec<bool>) -> Self {
        let size = parts.iter().map(|&p| u64::from(p)).sum();
        Self { parts, marked, size }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn marked(&self) -> &[bool] {
        &self.marked
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `(value, marked)` pairs in part order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, bool)> + '_ {
        self.parts.iter().copied().zip(self.marked.iter().copied())
    }

    /// Total weight of the marked parts.
    pub fn marked_weight(&self) -> u64 {
        self.iter().filter(|&(_, m)| m).map(|(p, _)| u64::from(p)).sum()
    }
}

impl fmt::Display for Overpartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (p, m)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if m {
                write!(f, "{p}'")?;
            } else {
                write!(f, "{p}")?;
            }
        }
        write!(f, ")")
    }
}

pub fn marked_weight(op: &Overpartition) -> u64 {
    op.marked_weight()
}

#[derive(Serialize, Deserialize)]
struct SequenceRecord {
    n: u64,
    parts: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct OverpartitionRecord {
    n: u64,
    parts: Vec<u32>,
    marked: Vec<bool>,
}

/// Comma-separated items, optionally wrapped in parentheses.
fn split_items(s: &str) -> Vec<&str> {
    let s = s.trim();
    let s = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(s);
    s.split(',').map(str::trim).filter(|t| !t.is_empty()).collect()
}

fn parse_part(item: &str) -> Result<u32> {
    item.parse()
        .map_err(|_| Error::validation(format!("`{item}` is not a positive integer")))
}

/// Parses `1,2,1` or `(1,2,1)`.
impl FromStr for UnimodalSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = split_items(s).into_iter().map(parse_part).collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }
}

/// Parses the display form, e.g. `(2',1,1')`; `()` is the empty
/// overpartition.
impl FromStr for Overpartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = Vec::new();
        let mut marked = Vec::new();
        for item in split_items(s) {
            let (value, mark) = match item.strip_suffix('\'') {
                Some(v) => (v, true),
                None => (item, false),
            };
            parts.push(parse_part(value.trim())?);
            marked.push(mark);
        }
        Self::new(parts, marked)
    }
}

impl Serialize for UnimodalSequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SequenceRecord {
            n: self.size,
            parts: self.parts.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for UnimodalSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rec = SequenceRecord::deserialize(d)?;
        let seq = UnimodalSequence::new(rec.parts).map_err(serde::de::Error::custom)?;
        if seq.size() != rec.n {
            return Err(serde::de::Error::custom(format!(
                "n = {} but parts sum to {}",
                rec.n,
                seq.size()
            )));
        }
        Ok(seq)
    }
}

impl Serialize for Overpartition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OverpartitionRecord {
            n: self.size,
            parts: self.parts.clone(),
            marked: self.marked.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Overpartition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rec = OverpartitionRecord::deserialize(d)?;
        let op = Overpartition::new(rec.parts, rec.marked).map_err(serde::de::Error::custom)?;
        if op.size() != rec.n {
            return Err(serde::de::Error::custom(format!(
                "n = {} but parts sum to {}",
                rec.n,
                op.size()
            )));
        }
        Ok(op)
    }
}
