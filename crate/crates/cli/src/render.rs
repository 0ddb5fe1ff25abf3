//! ASCII pictures of configurations.

use gridpattern::canonical::{canonical_frames, head_tail};
use gridpattern::geometry::bounding_rect;
use gridpattern::target::TargetPattern;
use gridpattern::{GridPoint, PointSet};

/// The pattern placed in the configuration's canonical frame, in the
/// configuration's coordinates.
pub fn target_overlay(c: &PointSet, t: &TargetPattern) -> Option<PointSet> {
    let frames = canonical_frames(c).ok()?;
    let f = frames.first()?.resolved();
    Some(t.points.map(|q| f.point_from_frame(q)))
}

/// Draws the bounding rectangle of the robots and overlay cells, top row
/// first. `R` robot, `H`/`T` head and tail, `x` empty overlay cell, `·`
/// empty.
pub fn render(c: &PointSet, overlay: Option<&PointSet>) -> String {
    let mut all = c.clone();
    if let Some(o) = overlay {
        for p in o {
            all.insert(p);
        }
    }
    let Ok(r) = bounding_rect(&all) else {
        return String::new();
    };
    let ends = canonical_frames(c)
        .ok()
        .and_then(|fs| fs.first().and_then(|f| head_tail(c, f).ok()));
    let mut out = String::new();
    for y in (r.min.y..=r.max.y).rev() {
        for x in r.min.x..=r.max.x {
            let p = GridPoint::new(x, y);
            let ch = if c.contains(&p) {
                match ends {
                    Some((h, _)) if h == p => 'H',
                    Some((_, t)) if t == p => 'T',
                    _ => 'R',
                }
            } else if overlay.is_some_and(|o| o.contains(&p)) {
                'x'
            } else {
                '·'
            };
            out.push(ch);
        }
        out.push('\n');
    }
    out
}
