//! Human-readable dump of everything a robot derives from a snapshot.

use std::fmt::Write as _;

use anyhow::Result;
use gridpattern::algorithm::plan;
use gridpattern::canonical::{
    corner_strings, head_tail, is_asymmetric, maximal_strings, CornerString,
};
use gridpattern::conditions::evaluate_conditions;
use gridpattern::geometry::{bounding_rect, Dir};
use gridpattern::target::TargetPattern;
use gridpattern::PointSet;

fn dir_name(d: Dir) -> &'static str {
    match d {
        Dir::PosX => "+x",
        Dir::NegX => "-x",
        Dir::PosY => "+y",
        Dir::NegY => "-y",
    }
}

fn describe(s: &CornerString) -> String {
    format!(
        "corner {} short {} long {}: {}",
        s.corner,
        dir_name(s.short_dir),
        dir_name(s.long_dir),
        s
    )
}

pub fn analyze(c: &PointSet, target: Option<&TargetPattern>) -> Result<String> {
    let mut out = String::new();
    let r = bounding_rect(c)?;
    writeln!(out, "robots: {}", c.len())?;
    writeln!(
        out,
        "bounding rectangle: {} to {} ({} x {} points)",
        r.min, r.max, r.width_pts, r.height_pts
    )?;

    let strings = corner_strings(c)?;
    writeln!(out, "corner strings:")?;
    for s in &strings {
        writeln!(out, "  {}", describe(s))?;
    }

    let maximal = maximal_strings(c)?;
    let label = if maximal.len() == 1 {
        "unique"
    } else {
        "shared"
    };
    writeln!(out, "maximal string ({label}): {}", maximal[0])?;
    for s in &maximal {
        writeln!(out, "  leading {}", describe(s))?;
        writeln!(out, "  frame {}", s.frame())?;
    }

    if is_asymmetric(c)? {
        if maximal.len() > 1 {
            writeln!(
                out,
                "asymmetric (equal strings read the same robots from different corners)"
            )?;
        } else {
            writeln!(out, "asymmetric")?;
        }
    } else {
        let mut repeated: Vec<String> = Vec::new();
        for (i, a) in strings.iter().enumerate() {
            if strings[i + 1..].iter().any(|b| a.same_value(b)) {
                let v = a.to_string();
                if !repeated.contains(&v) {
                    repeated.push(v);
                }
            }
        }
        writeln!(
            out,
            "symmetric: repeated string values {}",
            repeated.join(", ")
        )?;
    }

    if c.len() >= 2 {
        let (head, tail) = head_tail(c, &maximal[0].frame())?;
        writeln!(out, "head {head} tail {tail}")?;
    }

    if let Some(t) = target {
        writeln!(
            out,
            "pattern in canonical coordinates: {}",
            points_line(&t.points)
        )?;
        if c.len() != t.len() {
            writeln!(
                out,
                "pattern has {} points, configuration has {}",
                t.len(),
                c.len()
            )?;
            return Ok(out);
        }
        if c.len() >= 3 {
            let framed = gridpattern::canonical::to_frame_coords(c, &maximal[0].frame())?;
            let cv = evaluate_conditions(&framed, t)?;
            writeln!(out, "conditions: {cv}")?;
        }
        let p = plan(c, t)?;
        writeln!(out, "phase: {}", p.phase)?;
        if p.frame_classes > 1 {
            writeln!(out, "frame classes: {}", p.frame_classes)?;
        }
        for (from, d) in &p.moves {
            writeln!(out, "move: {from} {}", dir_name(*d))?;
        }
        if let Some(flag) = p.flag {
            writeln!(out, "flag: {flag:?}")?;
        }
    }
    Ok(out)
}

fn points_line(s: &PointSet) -> String {
    s.iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}
