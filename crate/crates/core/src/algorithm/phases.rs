//! Per-phase movement rules, all expressed in the canonical frame.
//!
//! Each rule returns the robots (by frame position) that step, with their
//! direction. Phases 1-3 and 5-7 move a single robot; phase 4 moves the
//! interior robots along the snake.

use crate::conditions::ConditionVector;
use crate::error::{Error, Result};
use crate::geometry::{Dir, GridPoint, PointSet};
use crate::target::TargetPattern;

use super::path::{snake_index, snake_path, PathInstance};
use super::Flag;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleOutcome {
    pub moves: Vec<(GridPoint, Dir)>,
    pub flag: Option<Flag>,
}

impl RuleOutcome {
    fn single(robot: GridPoint, dir: Dir) -> Self {
        RuleOutcome {
            moves: vec![(robot, dir)],
            flag: None,
        }
    }

    fn blocked() -> Self {
        RuleOutcome {
            moves: Vec::new(),
            flag: Some(Flag::Blocked),
        }
    }
}

fn vertical_toward(from: i64, to: i64) -> Option<Dir> {
    match to.cmp(&from) {
        std::cmp::Ordering::Greater => Some(Dir::PosY),
        std::cmp::Ordering::Less => Some(Dir::NegY),
        std::cmp::Ordering::Equal => None,
    }
}

pub fn phase1_rule(cv: &ConditionVector) -> RuleOutcome {
    RuleOutcome::single(cv.tail, Dir::PosX)
}

pub fn phase2_rule(cv: &ConditionVector) -> Result<RuleOutcome> {
    if cv.head.x != 0 || cv.head.y <= 0 {
        return Err(Error::Internal(format!(
            "phase 2 head at {} cannot move down",
            cv.head
        )));
    }
    Ok(RuleOutcome::single(cv.head, Dir::NegY))
}

pub fn phase3_rule(cv: &ConditionVector) -> Result<RuleOutcome> {
    // With C8 and the rest spanning all rows, moving up would pass the
    // mirror axis; go down instead and let the frame flip.
    if !cv.c8 || cv.rows > cv.rest_height {
        return Ok(RuleOutcome::single(cv.tail, Dir::PosY));
    }
    if 2 * cv.tail.y >= cv.rows - 1 {
        return Err(Error::Internal(format!(
            "phase 3 tail {} at or above the mirror axis of {} rows",
            cv.tail, cv.rows
        )));
    }
    Ok(RuleOutcome::single(cv.tail, Dir::NegY))
}

pub fn phase4_rule(
    c_frame: &PointSet,
    cv: &ConditionVector,
    t: &TargetPattern,
) -> Result<RuleOutcome> {
    let rows = cv.rows - 1;
    let cols = cv.cols / 2;
    let index_of = |p: GridPoint| {
        snake_index(rows, cols, p)
            .ok_or_else(|| Error::Internal(format!("phase 4 point {p} lies off the snake")))
    };
    let interior: Vec<GridPoint> = c_frame
        .iter()
        .filter(|&p| p != cv.head && p != cv.tail)
        .collect();
    let robot_indices = interior
        .iter()
        .map(|&p| index_of(p))
        .collect::<Result<Vec<_>>>()?;
    let target_indices = t
        .interior
        .iter()
        .map(index_of)
        .collect::<Result<Vec<_>>>()?;
    let path = PathInstance::new(snake_path(rows, cols), robot_indices, target_indices)?;

    let mut moves = Vec::new();
    for &idx in &path.robot_indices {
        if let Some(next) = path.next_index(idx)? {
            let from = path.cells[idx];
            let to = path.cells[next];
            if c_frame.contains(&to) {
                // Only the head can be here, and no interior target is index 0.
                return Err(Error::Internal(format!(
                    "phase 4 step {from} -> {to} into an occupied cell"
                )));
            }
            moves.push((
                from,
                Dir::from_vector(to - from).expect("adjacent snake cells"),
            ));
        }
    }
    Ok(RuleOutcome { moves, flag: None })
}

pub fn phase5_rule(cv: &ConditionVector, t: &TargetPattern) -> Result<RuleOutcome> {
    let tail = cv.tail;
    let goal_y = t.tail.y;
    let toward = vertical_toward(tail.y, goal_y)
        .ok_or_else(|| Error::Internal("phase 5 with the tail already on its row".into()))?;
    if !cv.c8 {
        return Ok(RuleOutcome::single(tail, toward));
    }
    // Rest occupies rows [0, v-1]; its mirror axis is at (v-1)/2.
    let v = cv.rest_height;
    let tail_low = 2 * tail.y < v - 1;
    let tail_high = tail.y > v - 1;
    let goal_low = 2 * goal_y < v;
    let goal_high = goal_y > v - 1;
    if !(tail_low || tail_high) {
        return Err(Error::Internal(format!(
            "phase 5 tail {tail} between mirror axis and top of rest"
        )));
    }
    if !(goal_low || goal_high) {
        return Err(Error::Internal(format!(
            "phase 5 tail goal row {goal_y} above the mirror axis of the rest"
        )));
    }
    let dir = if (tail_low && goal_low) || (tail_high && goal_high) {
        toward
    } else {
        Dir::NegY
    };
    Ok(RuleOutcome::single(tail, dir))
}

pub fn phase6_rule(
    c_frame: &PointSet,
    cv: &ConditionVector,
    t: &TargetPattern,
) -> Result<RuleOutcome> {
    let head = cv.head;
    if head.x != 0 || t.head.x != 0 {
        return Err(Error::Internal(format!(
            "phase 6 head {head} or goal {} off column 0",
            t.head
        )));
    }
    let Some(dir) = vertical_toward(head.y, t.head.y) else {
        return Ok(RuleOutcome::default());
    };
    if c_frame.contains(&head.step(dir)) {
        return Ok(RuleOutcome::blocked());
    }
    Ok(RuleOutcome::single(head, dir))
}

pub fn phase7_rule(
    c_frame: &PointSet,
    cv: &ConditionVector,
    t: &TargetPattern,
) -> Result<RuleOutcome> {
    let tail = cv.tail;
    let dir = match t.tail.x.cmp(&tail.x) {
        std::cmp::Ordering::Greater => Dir::PosX,
        std::cmp::Ordering::Less => Dir::NegX,
        std::cmp::Ordering::Equal => return Ok(RuleOutcome::default()),
    };
    if c_frame.contains(&tail.step(dir)) {
        return Ok(RuleOutcome::blocked());
    }
    Ok(RuleOutcome::single(tail, dir))
}
