//! Plain-text point lists: one "x y" pair per line, `#` starts a comment
//! line.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use gridpattern::{GridPoint, PointSet};

pub fn parse_config(text: &str) -> Result<PointSet> {
    let mut points = PointSet::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [x, y] = fields[..] else {
            bail!("line {}: expected two integers, got {:?}", n + 1, line);
        };
        let p = GridPoint::new(
            x.parse()
                .with_context(|| format!("line {}: bad x coordinate {x:?}", n + 1))?,
            y.parse()
                .with_context(|| format!("line {}: bad y coordinate {y:?}", n + 1))?,
        );
        if !points.insert(p) {
            bail!("line {}: duplicate point {p}", n + 1);
        }
    }
    if points.is_empty() {
        bail!("no points");
    }
    Ok(points)
}

pub fn format_config(points: &PointSet) -> String {
    let mut out = String::new();
    for p in points {
        writeln!(out, "{} {}", p.x, p.y).expect("writing to a string");
    }
    out
}

pub fn read_config(path: &Path) -> Result<PointSet> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_config(&text).with_context(|| format!("parsing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_blanks_and_signs() {
        let p = parse_config("# robots\n\n 1 2\n-3\t-4\n# end\n").unwrap();
        assert_eq!(p, PointSet::from([(1, 2), (-3, -4)]));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_config("1 2\n1 2\n").is_err());
        assert!(parse_config("1 2 3\n").is_err());
        assert!(parse_config("1 x\n").is_err());
        assert!(parse_config("# nothing\n").is_err());
    }

    #[test]
    fn round_trip() {
        let p = PointSet::from([(0, 1), (5, -2), (3, 3)]);
        assert_eq!(parse_config(&format_config(&p)).unwrap(), p);
    }
}
