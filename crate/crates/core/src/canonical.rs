//! Corner occupancy strings, asymmetry detection and canonical frames.
//!
//! A corner string scans the bounding rectangle from one corner along the
//! shorter side, then advances line by line along the longer side, writing
//! `1` for an occupied cell. The lexicographically largest strings pick the
//! leading corner(s) and with them the frame every robot agrees on.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{bounding_rect, Dir, GridPoint, Isometry, PointSet, Rect};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CornerString {
    pub corner: GridPoint,
    pub short_dir: Dir,
    pub long_dir: Dir,
    /// Grid points along the scanned (short) side.
    pub short_len: i64,
    /// Number of scan lines.
    pub long_len: i64,
    /// Ascending scan positions of the occupied cells.
    occupied: Vec<u64>,
}

impl CornerString {
    fn scan(
        c: &PointSet,
        corner: GridPoint,
        short_dir: Dir,
        long_dir: Dir,
        short_len: i64,
        long_len: i64,
    ) -> Self {
        let mut occupied: Vec<u64> = c
            .iter()
            .map(|p| {
                let d = p - corner;
                let along = d.dot(short_dir.vector());
                let line = d.dot(long_dir.vector());
                debug_assert!((0..short_len).contains(&along) && (0..long_len).contains(&line));
                (line * short_len + along) as u64
            })
            .collect();
        occupied.sort_unstable();
        CornerString {
            corner,
            short_dir,
            long_dir,
            short_len,
            long_len,
            occupied,
        }
    }

    pub fn len(&self) -> usize {
        (self.short_len * self.long_len) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn ones(&self) -> usize {
        self.occupied.len()
    }

    pub fn occupied_positions(&self) -> &[u64] {
        &self.occupied
    }

    pub fn bits(&self) -> Vec<bool> {
        let mut bits = vec![false; self.len()];
        for &i in &self.occupied {
            bits[i as usize] = true;
        }
        bits
    }

    /// The grid cell scanned at position `index`.
    pub fn cell(&self, index: u64) -> GridPoint {
        let index = index as i64;
        self.corner
            + self.short_dir.vector() * (index % self.short_len)
            + self.long_dir.vector() * (index / self.short_len)
    }

    /// Decodes the occupied cells back into a point set.
    pub fn decode(&self) -> PointSet {
        self.occupied.iter().map(|&i| self.cell(i)).collect()
    }

    /// Compares the strings as binary words, `1 > 0`.
    pub fn value_cmp(&self, other: &CornerString) -> Ordering {
        // The word with the earlier 1 at the first disagreement is larger.
        for (a, b) in self.occupied.iter().zip(&other.occupied) {
            if a != b {
                return b.cmp(a);
            }
        }
        self.occupied
            .len()
            .cmp(&other.occupied.len())
            .then(self.len().cmp(&other.len()))
    }

    pub fn same_value(&self, other: &CornerString) -> bool {
        self.value_cmp(other) == Ordering::Equal
    }

    /// Both scans visit the same physical cell at every occupied position,
    /// i.e. the isometry relating them fixes every robot.
    fn pointwise_equal(&self, other: &CornerString) -> bool {
        self.same_value(other) && self.occupied.iter().all(|&i| self.cell(i) == other.cell(i))
    }

    pub fn frame(&self) -> Frame {
        let degenerate = self.short_len == 1 || self.long_len == 1;
        Frame {
            origin: self.corner,
            x_dir: self.long_dir,
            y_dir: if degenerate {
                None
            } else {
                Some(self.short_dir)
            },
        }
    }
}

impl fmt::Display for CornerString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A candidate canonical coordinate system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Frame {
    pub origin: GridPoint,
    pub x_dir: Dir,
    /// `None` when every robot lies on one grid line.
    pub y_dir: Option<Dir>,
}

impl Frame {
    pub fn identity() -> Frame {
        Frame {
            origin: GridPoint::ORIGIN,
            x_dir: Dir::PosX,
            y_dir: Some(Dir::PosY),
        }
    }

    fn sort_key(&self) -> (GridPoint, GridPoint, Option<GridPoint>) {
        (
            self.origin,
            self.x_dir.vector(),
            self.y_dir.map(Dir::vector),
        )
    }

    /// Fills an undetermined vertical axis with the perpendicular a robot
    /// picks from its own coordinate system: `+y` when the line runs along
    /// `x`, `+x` otherwise.
    pub fn resolved(&self) -> Frame {
        let y = self.y_dir.unwrap_or(if self.x_dir.is_horizontal() {
            Dir::PosY
        } else {
            Dir::PosX
        });
        Frame {
            y_dir: Some(y),
            ..*self
        }
    }

    pub fn point_to_frame(&self, p: GridPoint) -> Result<GridPoint> {
        let d = p - self.origin;
        let x = d.dot(self.x_dir.vector());
        let y = match self.y_dir {
            Some(y) => d.dot(y.vector()),
            None => {
                if d.dot(self.x_dir.vector().rot90()) != 0 {
                    return Err(Error::UndeterminedAxis);
                }
                0
            }
        };
        Ok(GridPoint::new(x, y))
    }

    /// Inverse of [`Frame::point_to_frame`]. An undetermined axis is
    /// resolved as in [`Frame::resolved`].
    pub fn point_from_frame(&self, q: GridPoint) -> GridPoint {
        let y = self.resolved().y_dir.expect("resolved frame");
        self.origin + self.x_dir.vector() * q.x + y.vector() * q.y
    }

    pub fn dir_from_frame(&self, d: Dir) -> Dir {
        let v = self.point_from_frame(d.vector()) - self.origin;
        Dir::from_vector(v).expect("unit vector")
    }

    /// The isometry taking outer coordinates to frame coordinates.
    pub fn to_isometry(&self) -> Isometry {
        let f = self.resolved();
        let x = f.x_dir.vector();
        let y = f.y_dir.expect("resolved").vector();
        let lin = Isometry::orientations()
            .find(|g| {
                g.apply_linear(x) == GridPoint::new(1, 0)
                    && g.apply_linear(y) == GridPoint::new(0, 1)
            })
            .expect("orthonormal frame");
        Isometry {
            translation: -lin.apply_linear(f.origin),
            ..lin
        }
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = |d: Dir| {
            let p = d.vector();
            format!("({},{})", p.x, p.y)
        };
        write!(
            f,
            "origin={} x={} y={}",
            self.origin,
            v(self.x_dir),
            self.y_dir.map(v).unwrap_or_else(|| "undetermined".into())
        )
    }
}

fn toward(from: i64, to: i64, pos: Dir, neg: Dir) -> Dir {
    if to >= from {
        pos
    } else {
        neg
    }
}

fn strings_for_rect(c: &PointSet, r: &Rect) -> Vec<CornerString> {
    let (w, h) = (r.width_pts, r.height_pts);
    let mut out = Vec::with_capacity(8);
    if w == 1 && h == 1 {
        out.push(CornerString::scan(c, r.min, Dir::PosY, Dir::PosX, 1, 1));
    } else if h == 1 {
        for (corner, long) in [(r.min, Dir::PosX), (r.max, Dir::NegX)] {
            let short = Dir::from_vector(long.vector().rot90()).unwrap();
            out.push(CornerString::scan(c, corner, short, long, 1, w));
        }
    } else if w == 1 {
        for (corner, long) in [(r.min, Dir::PosY), (r.max, Dir::NegY)] {
            let short = Dir::from_vector(long.vector().rot90()).unwrap();
            out.push(CornerString::scan(c, corner, short, long, 1, h));
        }
    } else {
        for corner in r.corners() {
            let hdir = toward(corner.x, r.min.x + r.max.x - corner.x, Dir::PosX, Dir::NegX);
            let vdir = toward(corner.y, r.min.y + r.max.y - corner.y, Dir::PosY, Dir::NegY);
            if h <= w {
                out.push(CornerString::scan(c, corner, vdir, hdir, h, w));
            }
            if w <= h {
                out.push(CornerString::scan(c, corner, hdir, vdir, w, h));
            }
        }
    }
    out
}

/// All corner strings of the configuration: one per corner for a proper
/// rectangle, two per corner for a square, one per end for a segment.
pub fn corner_strings(c: &PointSet) -> Result<Vec<CornerString>> {
    let r = bounding_rect(c)?;
    Ok(strings_for_rect(c, &r))
}

/// True iff no non-trivial symmetry maps the configuration to itself.
///
/// Two equal strings whose scans visit the same physical cell at every
/// occupied position only witness a trivial symmetry (all robots on a
/// diagonal of a square) and do not count.
pub fn is_asymmetric(c: &PointSet) -> Result<bool> {
    let strings = corner_strings(c)?;
    for (i, a) in strings.iter().enumerate() {
        for b in &strings[i + 1..] {
            if a.same_value(b) && !a.pointwise_equal(b) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The strings of maximal value, in canonical frame order.
pub fn maximal_strings(c: &PointSet) -> Result<Vec<CornerString>> {
    let strings = corner_strings(c)?;
    let best = strings
        .iter()
        .max_by(|a, b| a.value_cmp(b))
        .cloned()
        .expect("at least one corner string");
    let mut max: Vec<CornerString> = strings
        .into_iter()
        .filter(|s| s.same_value(&best))
        .collect();
    max.sort_by_key(|s| s.frame().sort_key());
    Ok(max)
}

/// One frame per maximal corner string, ordered by origin and then axes.
pub fn canonical_frames(c: &PointSet) -> Result<Vec<Frame>> {
    Ok(maximal_strings(c)?
        .iter()
        .map(CornerString::frame)
        .collect())
}

pub fn to_frame_coords(c: &PointSet, f: &Frame) -> Result<PointSet> {
    c.iter().map(|p| f.point_to_frame(p)).collect()
}

/// Head and tail: the robots at the first and last `1` of the frame's
/// string, reported in the configuration's own coordinates.
pub fn head_tail(c: &PointSet, f: &Frame) -> Result<(GridPoint, GridPoint)> {
    if c.len() < 2 {
        return Err(Error::TooFewRobots {
            needed: 2,
            actual: c.len(),
        });
    }
    let framed = to_frame_coords(c, f)?;
    let head = f.point_from_frame(framed.first().expect("nonempty"));
    let tail = f.point_from_frame(framed.last().expect("nonempty"));
    Ok((head, tail))
}

/// Every non-trivial symmetry of the configuration, found by testing each
/// isometry that maps the bounding rectangle onto itself.
pub fn brute_force_symmetries(c: &PointSet) -> Result<Vec<Isometry>> {
    let r = bounding_rect(c)?;
    let mut out = Vec::new();
    for lin in Isometry::orientations() {
        let corners: PointSet = r.corners().iter().map(|&p| lin.apply_linear(p)).collect();
        let image = bounding_rect(&corners)?;
        if image.width_pts != r.width_pts || image.height_pts != r.height_pts {
            continue;
        }
        let g = Isometry {
            translation: r.min - image.min,
            ..lin
        };
        if g.is_identity() {
            continue;
        }
        let fixes_all = c.iter().all(|p| g.apply(p) == p);
        if !fixes_all && c.iter().all(|p| c.contains(&g.apply(p))) {
            out.push(g);
        }
    }
    Ok(out)
}

/// Isometries of the rectangle that fix every robot (other than identity).
pub fn trivial_symmetries(c: &PointSet) -> Result<Vec<Isometry>> {
    let r = bounding_rect(c)?;
    let mut out = Vec::new();
    for lin in Isometry::orientations() {
        let corners: PointSet = r.corners().iter().map(|&p| lin.apply_linear(p)).collect();
        let image = bounding_rect(&corners)?;
        let g = Isometry {
            translation: r.min - image.min,
            ..lin
        };
        if !g.is_identity() && c.iter().all(|p| g.apply(p) == p) {
            out.push(g);
        }
    }
    Ok(out)
}
