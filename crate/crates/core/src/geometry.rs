//! Diagram vertices, kept as exact integer coordinates over `√n`.

use crate::error::{Error, Result};
use crate::model::{Overpartition, UnimodalSequence};

/// A diagram corner at `(x/√n, y/√n)`; `x` and `y` count unit squares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub x: i64,
    pub y: i64,
}

impl Vertex {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }
}

/// Which of the three vertex classes a corner belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum VertexClass {
    Left,
    Peak,
    Right,
}

/// Left, peak and right corners of a renormalized shape.
///
/// Each list is in boundary order (left to right along the shape). The two
/// corners on the x-axis are not part of any list; [`VertexSet::boundary`]
/// adds them back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet {
    n: u64,
    pub left: Vec<Vertex>,
    pub peak: Vec<Vertex>,
    pub right: Vec<Vertex>,
}

impl VertexSet {
    /// Size of the diagram; coordinates are divided by `√n`.
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn scale(&self) -> f64 {
        1.0 / (self.n as f64).sqrt()
    }

    pub fn to_point(&self, v: Vertex) -> (f64, f64) {
        let s = self.scale();
        (v.x as f64 * s, v.y as f64 * s)
    }

    /// All corners with their class, in boundary order.
    pub fn classified(&self) -> impl Iterator<Item = (VertexClass, Vertex)> + '_ {
        let tag = |c: VertexClass| move |v: &Vertex| (c, *v);
        self.left
            .iter()
            .map(tag(VertexClass::Left))
            .chain(self.peak.iter().map(tag(VertexClass::Peak)))
            .chain(self.right.iter().map(tag(VertexClass::Right)))
    }

    /// The whole upper boundary including both x-axis endpoints.
    pub fn boundary(&self) -> Vec<Vertex> {
        let first = self.left.first().or(self.peak.first()).expect("peak present");
        let last = self.right.last().or(self.peak.last()).expect("peak present");
        let mut out = Vec::with_capacity(self.left.len() + self.peak.len() + self.right.len() + 2);
        out.push(Vertex::new(first.x, 0));
        out.extend(self.left.iter().chain(&self.peak).chain(&self.right));
        out.push(Vertex::new(last.x, 0));
        out
    }

    /// Recover column heights from the boundary.
    pub fn reconstruct_parts(&self) -> Result<Vec<u32>> {
        let path = self.boundary();
        let (x0, x1) = (path[0].x, path[path.len() - 1].x);
        let mut parts = vec![0u32; (x1 - x0) as usize];
        for w in path.windows(2) {
            let (a, b) = (w[0], w[1]);
            if a.y == b.y && b.x > a.x {
                for x in a.x..b.x {
                    parts[(x - x0) as usize] = a.y as u32;
                }
            } else if a.x != b.x {
                return Err(Error::validation("boundary has a diagonal step"));
            }
        }
        if parts.contains(&0) {
            return Err(Error::validation("boundary leaves a column uncovered"));
        }
        Ok(parts)
    }
}

/// Corners of the staircase over `parts` with the first column starting
/// at `x0`, excluding the two corners on the x-axis.
fn staircase(parts: &[u32], x0: i64) -> Vec<Vertex> {
    let mut out = Vec::with_capacity(2 * parts.len());
    out.push(Vertex::new(x0, i64::from(parts[0])));
    for j in 1..parts.len() {
        let (prev, cur) = (i64::from(parts[j - 1]), i64::from(parts[j]));
        if prev != cur {
            let x = x0 + j as i64;
            out.push(Vertex::new(x, prev));
            out.push(Vertex::new(x, cur));
        }
    }
    out.push(Vertex::new(x0 + parts.len() as i64, i64::from(parts[parts.len() - 1])));
    out
}

fn split_at_peak(n: u64, corners: Vec<Vertex>, peak_left: Vertex, peak_right: Vertex) -> VertexSet {
    let a = corners.iter().position(|&v| v == peak_left).expect("peak corner");
    let b = corners.iter().position(|&v| v == peak_right).expect("peak corner");
    VertexSet {
        n,
        left: corners[..a].to_vec(),
        peak: vec![peak_left, peak_right],
        right: corners[b + 1..].to_vec(),
    }
}

/// Vertices of the renormalized shape, with the leftmost peak vertex on
/// the y-axis.
pub fn renormalized_vertices(seq: &UnimodalSequence) -> VertexSet {
    let info = seq.peak_info();
    let k0 = (info.leftmost_peak_index - 1) as i64;
    let top = i64::from(info.peak_value);
    let corners = staircase(seq.parts(), -k0);
    split_at_peak(
        seq.size(),
        corners,
        Vertex::new(0, top),
        Vertex::new(info.multiplicity as i64, top),
    )
}

/// First-quadrant profile of an overpartition, ignoring marks.
pub fn overpartition_profile(op: &Overpartition) -> Result<VertexSet> {
    if op.is_empty() {
        return Err(Error::validation("the empty overpartition has no profile"));
    }
    let parts = op.parts();
    let top = i64::from(parts[0]);
    let width = parts.iter().take_while(|&&p| p == parts[0]).count() as i64;
    let corners = staircase(parts, 0);
    Ok(split_at_peak(
        op.size(),
        corners,
        Vertex::new(0, top),
        Vertex::new(width, top),
    ))
}
