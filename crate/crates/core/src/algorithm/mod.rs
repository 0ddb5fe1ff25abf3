//! The oblivious Look-Compute-Move decision function.
//!
//! A robot sees every robot's position in its own coordinates, recomputes
//! the canonical frame(s) from scratch, classifies the phase and applies the
//! phase rule. Nothing is remembered between cycles.

pub mod path;
pub mod phases;

use serde::{Deserialize, Serialize};

use crate::canonical::{canonical_frames, to_frame_coords, Frame};
use crate::conditions::{classify_phase, evaluate_conditions, ConditionVector, Phase};
use crate::error::{Error, Result};
use crate::geometry::{Dir, GridPoint, PointSet};
use crate::target::TargetPattern;

pub use path::{pf_on_path_step, snake_path, PathInstance};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    /// All robots, in the observer's coordinates.
    pub points: PointSet,
    pub self_pos: GridPoint,
}

impl Snapshot {
    pub fn new(points: PointSet, self_pos: GridPoint) -> Result<Self> {
        if !points.contains(&self_pos) {
            return Err(Error::Internal(format!(
                "observer {self_pos} not in its own snapshot"
            )));
        }
        Ok(Snapshot { points, self_pos })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MoveDecision {
    Stay,
    Step(Dir),
}

/// Diagnostics a decision can carry. Robots never read these.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Flag {
    /// Symmetric configuration in which no robot has a move all maximal
    /// frames agree on.
    StuckSymmetric,
    /// The designated mover's next cell is occupied.
    Blocked,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub action: MoveDecision,
    pub phase: Phase,
    pub flag: Option<Flag>,
}

/// What every robot would do in a configuration, in the coordinates the
/// configuration was given in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    pub phase: Phase,
    /// Robots that step and their directions, agreed by every maximal frame.
    pub moves: Vec<(GridPoint, Dir)>,
    pub flag: Option<Flag>,
    /// Number of maximal frames that are not related by a trivial symmetry.
    pub frame_classes: usize,
    /// Conditions under the first maximal frame.
    pub conditions: Option<ConditionVector>,
}

impl Plan {
    pub fn action_for(&self, robot: GridPoint) -> MoveDecision {
        self.moves
            .iter()
            .find(|(p, _)| *p == robot)
            .map_or(MoveDecision::Stay, |&(_, d)| MoveDecision::Step(d))
    }

    fn idle(phase: Phase, flag: Option<Flag>) -> Plan {
        Plan {
            phase,
            moves: Vec::new(),
            flag,
            frame_classes: 1,
            conditions: None,
        }
    }
}

/// Applies the phase rule of a configuration expressed in one of its
/// maximal frames. Moves are in frame coordinates.
pub fn plan_in_frame(
    c_frame: &PointSet,
    t: &TargetPattern,
) -> Result<(Phase, ConditionVector, phases::RuleOutcome)> {
    let cv = evaluate_conditions(c_frame, t)?;
    let phase = classify_phase(&cv);
    let outcome = match phase {
        Phase::Done => phases::RuleOutcome::default(),
        Phase::P1 => phases::phase1_rule(&cv),
        Phase::P2 => phases::phase2_rule(&cv)?,
        Phase::P3 => phases::phase3_rule(&cv)?,
        Phase::P4 => phases::phase4_rule(c_frame, &cv, t)?,
        Phase::P5 => phases::phase5_rule(&cv, t)?,
        Phase::P6 => phases::phase6_rule(c_frame, &cv, t)?,
        Phase::P7 => phases::phase7_rule(c_frame, &cv, t)?,
    };
    Ok((phase, cv, outcome))
}

/// Maximal frames, keeping one per class of frames that place every robot
/// at the same frame coordinates. The kept frame is the first in the
/// observer's own ordering, so the choice is local to the observer.
fn distinct_frames(points: &PointSet) -> Result<Vec<(Frame, PointSet)>> {
    let mut kept: Vec<(Frame, PointSet)> = Vec::new();
    for f in canonical_frames(points)? {
        let framed = to_frame_coords(points, &f)?;
        let same_class = kept.iter().any(|(g, _)| {
            points
                .iter()
                .all(|p| f.point_to_frame(p).ok() == g.point_to_frame(p).ok())
        });
        if !same_class {
            kept.push((f, framed));
        }
    }
    Ok(kept)
}

/// Computes the agreed moves of every robot in `points`.
pub fn plan(points: &PointSet, t: &TargetPattern) -> Result<Plan> {
    if points.len() != t.len() {
        return Err(Error::CardinalityMismatch {
            config: points.len(),
            target: t.len(),
        });
    }
    if points.len() <= 1 {
        return Ok(Plan::idle(Phase::Done, None));
    }
    let frames = distinct_frames(points)?;
    if frames.iter().any(|(_, framed)| *framed == t.points) {
        return Ok(Plan {
            frame_classes: frames.len(),
            ..Plan::idle(Phase::Done, None)
        });
    }
    if points.len() == 2 {
        return Ok(Plan {
            frame_classes: frames.len(),
            ..Plan::idle(Phase::P1, Some(Flag::StuckSymmetric))
        });
    }

    let mut per_frame = Vec::with_capacity(frames.len());
    for (f, framed) in &frames {
        let (phase, cv, outcome) = plan_in_frame(framed, t)?;
        let moves: Vec<(GridPoint, Dir)> = outcome
            .moves
            .iter()
            .map(|&(q, d)| (f.point_from_frame(q), f.dir_from_frame(d)))
            .collect();
        per_frame.push((phase, cv, moves, outcome.flag));
    }

    let (phase, cv, first_moves, first_flag) = per_frame[0].clone();
    if per_frame.len() == 1 {
        return Ok(Plan {
            phase,
            moves: first_moves,
            flag: first_flag,
            frame_classes: 1,
            conditions: Some(cv),
        });
    }
    let agreed: Vec<(GridPoint, Dir)> = first_moves
        .into_iter()
        .filter(|m| {
            per_frame[1..]
                .iter()
                .all(|(_, _, moves, _)| moves.contains(m))
        })
        .collect();
    let flag = if agreed.is_empty() {
        Some(Flag::StuckSymmetric)
    } else {
        None
    };
    Ok(Plan {
        phase,
        moves: agreed,
        flag,
        frame_classes: per_frame.len(),
        conditions: Some(cv),
    })
}

/// The decision of the robot at `s.self_pos`.
pub fn compute(s: &Snapshot, t: &TargetPattern) -> Result<Decision> {
    let p = plan(&s.points, t)?;
    Ok(Decision {
        action: p.action_for(s.self_pos),
        phase: p.phase,
        flag: p.flag,
    })
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

    fn line_target(k: i64) -> TargetPattern {
        canonicalize_target(&(0..k).map(|i| GridPoint::new(i, 0)).collect()).unwrap()
    }

    fn decide(points: &PointSet, t: &TargetPattern, robot: (i64, i64)) -> MoveDecision {
        compute(&Snapshot::new(points.clone(), robot.into()).unwrap(), t)
            .unwrap()
            .action
    }

    #[test]
    fn formed_pattern_everyone_stays() {
        let t = canonicalize_target(&eleven()).unwrap();
        let shifted = eleven().translate(GridPoint::new(10, -3));
        for p in shifted.iter() {
            let d = compute(&Snapshot::new(shifted.clone(), p).unwrap(), &t).unwrap();
            assert_eq!(d.action, MoveDecision::Stay);
            assert_eq!(d.phase, Phase::Done);
        }
    }

    #[test]
    fn eleven_towards_line_moves_tail_right() {
        let c = eleven();
        let t = line_target(11);
        for p in c.iter() {
            let expected = if p == GridPoint::new(7, 2) {
                MoveDecision::Step(Dir::PosX)
            } else {
                MoveDecision::Stay
            };
            assert_eq!(decide(&c, &t, (p.x, p.y)), expected, "robot {p}");
        }
    }

    #[test]
    fn single_robot_stays() {
        let t = canonicalize_target(&PointSet::from([(3, 3)])).unwrap();
        assert_eq!(
            decide(&PointSet::from([(0, 0)]), &t, (0, 0)),
            MoveDecision::Stay
        );
    }

    #[test]
    fn phase2_head_moves_down() {
        // Head on column 0 above the origin, tail far right, room to spare.
        let c = PointSet::from([(0, 1), (1, 0), (2, 4), (12, 2)]);
        let t = canonicalize_target(&PointSet::from([(0, 0), (1, 1), (2, 0), (3, 1)])).unwrap();
        let p = plan(&c, &t).unwrap();
        assert_eq!(p.phase, Phase::P2);
        assert_eq!(p.moves, vec![(GridPoint::new(0, 1), Dir::NegY)]);
    }

    #[test]
    fn phase7_symmetric_tail_on_axis_moves_left() {
        // Pattern mirror-symmetric about y = 1 with the tail on the axis.
        let raw = PointSet::from([(0, 0), (0, 2), (1, 1), (2, 1)]);
        let t = canonicalize_target(&raw).unwrap();
        let c = PointSet::from([(0, 0), (0, 2), (1, 1), (6, 1)]);
        let p = plan(&c, &t).unwrap();
        assert_eq!(p.frame_classes, 2);
        assert_eq!(p.phase, Phase::P7);
        assert_eq!(p.moves, vec![(GridPoint::new(6, 1), Dir::NegX)]);
    }
}
