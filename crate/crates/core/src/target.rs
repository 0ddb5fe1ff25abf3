//! The input pattern expressed in its canonical coordinate system.

use serde::{Deserialize, Serialize};

use crate::canonical::{canonical_frames, to_frame_coords};
use crate::error::{Error, Result};
use crate::geometry::{bounding_rect, GridPoint, PointSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetPattern {
    /// Pattern points with a leading corner at the origin.
    pub points: PointSet,
    /// Vertical (shorter) side, in grid points.
    pub rows: i64,
    /// Horizontal side, in grid points.
    pub cols: i64,
    pub head: GridPoint,
    pub tail: GridPoint,
    /// `points` without the tail.
    pub without_tail: PointSet,
    /// `points` without head and tail.
    pub interior: PointSet,
}

impl TargetPattern {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Moves an arbitrary pattern into canonical coordinates.
///
/// Every maximal corner string yields the same point set; a disagreement is
/// reported as an internal error.
pub fn canonicalize_target(raw: &PointSet) -> Result<TargetPattern> {
    let frames = canonical_frames(raw)?;
    let points = to_frame_coords(raw, &frames[0])?;
    for f in &frames[1..] {
        if to_frame_coords(raw, f)? != points {
            return Err(Error::Internal(format!(
                "maximal frames disagree on the canonical pattern ({} vs {})",
                frames[0], f
            )));
        }
    }
    let r = bounding_rect(&points)?;
    debug_assert_eq!(r.min, GridPoint::ORIGIN);
    let head = points.first().expect("nonempty");
    let tail = points.last().expect("nonempty");
    let without_tail = points.without(&tail);
    let interior = without_tail.without(&head);
    Ok(TargetPattern {
        rows: r.height_pts,
        cols: r.width_pts,
        head,
        tail,
        without_tail,
        interior,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tromino_square() {
        let t = canonicalize_target(&PointSet::from([(5, 5), (5, 6), (6, 5)])).unwrap();
        assert_eq!(t.points, PointSet::from([(0, 0), (0, 1), (1, 0)]));
        assert_eq!((t.rows, t.cols), (2, 2));
        assert_eq!(t.head, GridPoint::new(0, 0));
        assert_eq!(t.tail, GridPoint::new(1, 0));
        assert_eq!(t.interior, PointSet::from([(0, 1)]));
    }

    #[test]
    fn symmetric_line() {
        let raw: PointSet = (0..=10).map(|i| GridPoint::new(i, 0)).collect();
        let t = canonicalize_target(&raw).unwrap();
        assert_eq!(t.points, raw);
        assert_eq!((t.rows, t.cols), (1, 11));
        assert_eq!(
            (t.head, t.tail),
            (GridPoint::new(0, 0), GridPoint::new(10, 0))
        );
        assert_eq!(t.interior.len(), 9);
    }

    #[test]
    fn vertical_line_becomes_horizontal() {
        let raw: PointSet = [0, 1, 3]
            .into_iter()
            .map(|i| GridPoint::new(4, i + 2))
            .collect();
        let t = canonicalize_target(&raw).unwrap();
        assert_eq!(t.points, PointSet::from([(0, 0), (1, 0), (3, 0)]));
    }

    #[test]
    fn single_point_pattern() {
        let t = canonicalize_target(&PointSet::from([(9, -3)])).unwrap();
        assert_eq!(t.points, PointSet::from([(0, 0)]));
        assert_eq!(t.head, t.tail);
        assert!(t.interior.is_empty());
    }
}
