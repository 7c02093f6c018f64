//! Column diagrams as SVG, one square per unit, and a reader for them.
//!
//! Each part is a `<rect class="column">` whose height encodes the part;
//! a marked overpartition part gets an extra shaded `<rect class="mark">`
//! over its top square.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::model::{Overpartition, UnimodalSequence};

/// Side of one square.
pub const UNIT: u64 = 10;

fn render(parts: &[u32], marked: &[bool], comment: Option<&str>) -> String {
    let width = parts.len() as u64 * UNIT;
    let top = parts.iter().copied().max().unwrap_or(0) as u64;
    let height = top * UNIT;
    let mut s = String::new();
    if let Some(c) = comment {
        let _ = writeln!(s, "<!-- {} -->", c.replace("--", "- -"));
    }
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    for (i, &p) in parts.iter().enumerate() {
        let x = i as u64 * UNIT;
        let h = p as u64 * UNIT;
        let _ = writeln!(
            s,
            r##"  <rect class="column" x="{x}" y="{}" width="{UNIT}" height="{h}" fill="none" stroke="#000"/>"##,
            height - h
        );
        for j in 1..p as u64 {
            let y = height - j * UNIT;
            let _ = writeln!(s, r##"  <line x1="{x}" y1="{y}" x2="{}" y2="{y}" stroke="#000"/>"##, x + UNIT);
        }
        if marked.get(i).copied().unwrap_or(false) {
            let _ = writeln!(
                s,
                r##"  <rect class="mark" x="{x}" y="{}" width="{UNIT}" height="{UNIT}" fill="#999"/>"##,
                height - h
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

pub fn sequence_svg(seq: &UnimodalSequence, comment: Option<&str>) -> String {
    render(seq.parts(), &[], comment)
}

pub fn overpartition_svg(op: &Overpartition, comment: Option<&str>) -> String {
    render(op.parts(), op.marked(), comment)
}

fn attr(tag: &str, name: &str) -> Result<u64> {
    let key = format!(" {name}=\"");
    let start = tag
        .find(&key)
        .ok_or_else(|| Error::validation(format!("rect without {name}")))?
        + key.len();
    let end = tag[start..]
        .find('"')
        .ok_or_else(|| Error::validation("unterminated attribute"))?;
    tag[start..start + end]
        .parse()
        .map_err(|_| Error::validation(format!("bad {name} value")))
}

/// Column heights and marks read back from a diagram written by this module.
pub fn parse_columns(svg: &str) -> Result<(Vec<u32>, Vec<bool>)> {
    let mut columns: Vec<(u64, u32)> = Vec::new();
    let mut marks: Vec<u64> = Vec::new();
    for tag in svg.split('<').filter(|t| t.starts_with("rect ")) {
        let x = attr(tag, "x")?;
        if x % UNIT != 0 {
            return Err(Error::validation("column not on the grid"));
        }
        if tag.contains(r#"class="column""#) {
            let h = attr(tag, "height")?;
            if h % UNIT != 0 {
                return Err(Error::validation("column height not a whole number of squares"));
            }
            columns.push((x / UNIT, (h / UNIT) as u32));
        } else if tag.contains(r#"class="mark""#) {
            marks.push(x / UNIT);
        }
    }
    columns.sort_unstable();
    if columns.iter().enumerate().any(|(i, c)| c.0 != i as u64) {
        return Err(Error::validation("columns are not contiguous"));
    }
    let parts: Vec<u32> = columns.into_iter().map(|c| c.1).collect();
    let mut marked = vec![false; parts.len()];
    for m in marks {
        *marked
            .get_mut(m as usize)
            .ok_or_else(|| Error::validation("mark outside the diagram"))? = true;
    }
    Ok((parts, marked))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{enumerate_family, enumerate_overpartitions};
    use crate::model::Family;

    #[test]
    fn sequences_round_trip() {
        for s in enumerate_family(Family::Unrestricted, 9).unwrap() {
            let svg = sequence_svg(&s, Some("unimodal 0.1.0 --n 9"));
            let (parts, marked) = parse_columns(&svg).unwrap();
            assert_eq!(parts, s.parts());
            assert!(marked.iter().all(|m| !m));
        }
    }

    #[test]
    fn overpartitions_round_trip() {
        for op in enumerate_overpartitions(6).unwrap() {
            let svg = overpartition_svg(&op, None);
            let (parts, marked) = parse_columns(&svg).unwrap();
            assert_eq!(Overpartition::new(parts, marked).unwrap(), op);
        }
    }

    #[test]
    fn one_square_is_ten_units() {
        let s = UnimodalSequence::new(vec![1, 3]).unwrap();
        let svg = sequence_svg(&s, None);
        assert!(svg.contains(r#"width="20" height="30""#));
        assert!(svg.contains(r#"class="column" x="10" y="0" width="10" height="30""#));
    }

    #[test]
    fn comment_is_escaped() {
        let svg = sequence_svg(&UnimodalSequence::new(vec![1]).unwrap(), Some("a --seed 3"));
        assert!(svg.starts_with("<!-- a - -seed 3 -->"));
    }
}
