//! The nine Boolean conditions a robot evaluates on its snapshot and the
//! phase they select.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{bounding_rect, GridPoint, PointSet};
use crate::target::TargetPattern;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConditionVector {
    /// Configuration equals the pattern.
    pub c0: bool,
    /// Configuration without its tail equals the pattern without its tail.
    pub c1: bool,
    /// Tail sits on the pattern tail's row.
    pub c2: bool,
    /// `cols >= max(target_rows, rows) + 2`.
    pub c3: bool,
    /// `cols >= 2 * max(target_cols, rest_width)`.
    pub c4: bool,
    /// Head at the origin.
    pub c5: bool,
    /// `rows >= max(target_rows, rest_height) + 1`.
    pub c6: bool,
    /// Interior robots equal the pattern interior.
    pub c7: bool,
    /// The configuration without its tail has a non-trivial reflection
    /// about a horizontal line.
    pub c8: bool,
    pub rows: i64,
    pub cols: i64,
    pub target_rows: i64,
    pub target_cols: i64,
    /// Horizontal side of the bounding rectangle of the configuration
    /// without its tail.
    pub rest_width: i64,
    /// Vertical side of the same rectangle.
    pub rest_height: i64,
    pub head: GridPoint,
    pub tail: GridPoint,
}

impl ConditionVector {
    pub fn bits(&self) -> [bool; 9] {
        [
            self.c0, self.c1, self.c2, self.c3, self.c4, self.c5, self.c6, self.c7, self.c8,
        ]
    }
}

impl fmt::Display for ConditionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.bits().iter().enumerate() {
            write!(f, "C{}={} ", i, u8::from(*b))?;
        }
        write!(
            f,
            "m={} n={} M={} N={} H={} V={}",
            self.rows,
            self.cols,
            self.target_rows,
            self.target_cols,
            self.rest_width,
            self.rest_height
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Phase {
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
    P7,
    #[serde(rename = "DONE")]
    Done,
}

impl Phase {
    pub const ACTIVE: [Phase; 7] = [
        Phase::P1,
        Phase::P2,
        Phase::P3,
        Phase::P4,
        Phase::P5,
        Phase::P6,
        Phase::P7,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Phase::P1 => "P1",
            Phase::P2 => "P2",
            Phase::P3 => "P3",
            Phase::P4 => "P4",
            Phase::P5 => "P5",
            Phase::P6 => "P6",
            Phase::P7 => "P7",
            Phase::Done => "DONE",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Phase {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Phase::ACTIVE
            .into_iter()
            .chain([Phase::Done])
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown phase {s:?}"))
    }
}

/// Whether `s` is mapped onto itself, moving at least one point, by a
/// reflection about some horizontal line (integer or half-integer row).
pub fn has_horizontal_reflection(s: &PointSet) -> bool {
    let Ok(r) = bounding_rect(s) else {
        return false;
    };
    // Axis at y = doubled / 2.
    (2 * r.min.y..=2 * r.max.y).any(|doubled| {
        let mirror = |p: GridPoint| GridPoint::new(p.x, doubled - p.y);
        s.iter().any(|p| mirror(p) != p) && s.iter().all(|p| s.contains(&mirror(p)))
    })
}

/// Evaluates the conditions on a configuration already expressed in one of
/// its maximal frames.
pub fn evaluate_conditions(c_frame: &PointSet, t: &TargetPattern) -> Result<ConditionVector> {
    if c_frame.len() != t.len() {
        return Err(Error::CardinalityMismatch {
            config: c_frame.len(),
            target: t.len(),
        });
    }
    if c_frame.len() < 3 {
        return Err(Error::TooFewRobots {
            needed: 3,
            actual: c_frame.len(),
        });
    }
    let r = bounding_rect(c_frame)?;
    let (rows, cols) = (r.height_pts, r.width_pts);
    let head = c_frame.first().expect("nonempty");
    let tail = c_frame.last().expect("nonempty");
    let rest = c_frame.without(&tail);
    let interior = rest.without(&head);
    let rr = bounding_rect(&rest)?;
    let (rest_width, rest_height) = (rr.width_pts, rr.height_pts);
    let (target_rows, target_cols) = (t.rows, t.cols);

    Ok(ConditionVector {
        c0: *c_frame == t.points,
        c1: rest == t.without_tail,
        c2: tail.y == t.tail.y,
        c3: cols >= target_rows.max(rows) + 2,
        c4: cols >= 2 * target_cols.max(rest_width),
        c5: head == GridPoint::ORIGIN,
        c6: rows > target_rows.max(rest_height),
        c7: interior == t.interior,
        c8: has_horizontal_reflection(&rest),
        rows,
        cols,
        target_rows,
        target_cols,
        rest_width,
        rest_height,
        head,
        tail,
    })
}

/// Walks the phase decision tree.
pub fn classify_phase(cv: &ConditionVector) -> Phase {
    classify_bits(&cv.bits())
}

pub fn classify_bits(c: &[bool; 9]) -> Phase {
    let [c0, c1, c2, c3, c4, c5, c6, c7, _] = *c;
    if c0 {
        Phase::Done
    } else if c1 && c2 {
        Phase::P7
    } else if !(c3 && c4) {
        Phase::P1
    } else if c7 {
        match (c2, c5) {
            (false, true) => Phase::P5,
            (false, false) => Phase::P2,
            (true, _) => Phase::P6,
        }
    } else if !c5 {
        Phase::P2
    } else if c6 {
        Phase::P4
    } else {
        Phase::P3
    }
}

/// The seven phase predicates written out as flat formulas, independent of
/// the decision tree in [`classify_bits`].
pub fn phase_predicates(c: &[bool; 9]) -> [bool; 7] {
    let [c0, c1, c2, c3, c4, c5, c6, c7, _] = *c;
    [
        !(c1 && c2) && !(c3 && c4),
        (c3 && c4 && !c5 && !c7) || (!c2 && c3 && c4 && !c5 && c7),
        c3 && c4 && c5 && !c6 && !c7,
        c3 && c4 && c5 && c6 && !c7,
        !c2 && c3 && c4 && c5 && c7,
        !c1 && c2 && c3 && c4 && c7,
        !c0 && c1 && c2,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::target::canonicalize_target;

    fn eleven() -> PointSet {
        PointSet::from([
            (0, 1),
            (0, 3),
            (1, 2),
            (2, 0),
            (3, 3),
            (3, 5),
            (4, 0),
            (4, 5),
            (5, 1),
            (6, 4),
            (7, 2),
        ])
    }

    fn line(k: i64) -> TargetPattern {
        canonicalize_target(&(0..k).map(|i| GridPoint::new(i, 0)).collect()).unwrap()
    }

    #[test]
    fn eleven_against_line_is_phase1() {
        let cv = evaluate_conditions(&eleven(), &line(11)).unwrap();
        assert_eq!(
            (
                cv.rows,
                cv.cols,
                cv.target_rows,
                cv.target_cols,
                cv.rest_width,
                cv.rest_height
            ),
            (6, 8, 1, 11, 7, 6)
        );
        assert!(cv.c3);
        assert!(!cv.c4);
        assert!(!cv.c1);
        assert_eq!(classify_phase(&cv), Phase::P1);
    }

    #[test]
    fn identical_configuration_is_done() {
        let t = canonicalize_target(&eleven()).unwrap();
        let cv = evaluate_conditions(&t.points, &t).unwrap();
        assert!(cv.c0 && cv.c1 && cv.c2 && cv.c7);
        assert_eq!(classify_phase(&cv), Phase::Done);
    }

    #[test]
    fn reflection_about_integer_row() {
        assert!(has_horizontal_reflection(&PointSet::from([
            (0, 0),
            (0, 2),
            (1, 1)
        ])));
        assert!(!has_horizontal_reflection(&PointSet::from([
            (0, 0),
            (0, 2),
            (1, 0)
        ])));
        // A single row is only fixed pointwise.
        assert!(!has_horizontal_reflection(&PointSet::from([
            (0, 0),
            (3, 0)
        ])));
        assert!(has_horizontal_reflection(&PointSet::from([(0, 0), (0, 1)])));
    }

    #[test]
    fn cardinality_and_size_errors() {
        let t = line(4);
        assert!(matches!(
            evaluate_conditions(&PointSet::from([(0, 0), (1, 0), (2, 1)]), &t),
            Err(Error::CardinalityMismatch { .. })
        ));
        let t2 = canonicalize_target(&PointSet::from([(0, 0), (1, 0)])).unwrap();
        assert!(matches!(
            evaluate_conditions(&PointSet::from([(0, 0), (2, 0)]), &t2),
            Err(Error::TooFewRobots { .. })
        ));
    }

    #[test]
    fn tree_root_cases() {
        let mut b = [false; 9];
        b[0] = true;
        assert_eq!(classify_bits(&b), Phase::Done);
        let mut b = [false; 9];
        b[1] = true;
        b[2] = true;
        assert_eq!(classify_bits(&b), Phase::P7);
    }

    #[test]
    fn tree_agrees_with_flat_predicates_on_all_vectors() {
        for mask in 0u32..512 {
            let b: [bool; 9] = std::array::from_fn(|i| mask & (1 << i) != 0);
            let phase = classify_bits(&b);
            let preds = phase_predicates(&b);
            if b[0] {
                assert_eq!(phase, Phase::Done);
                continue;
            }
            // C1 implies C7 for every realizable configuration.
            if b[1] && !b[7] {
                continue;
            }
            assert_eq!(preds.iter().filter(|&&p| p).count(), 1, "mask {mask:09b}");
            let idx = preds.iter().position(|&p| p).unwrap();
            assert_eq!(phase, Phase::ACTIVE[idx], "mask {mask:09b}");
        }
    }
}
