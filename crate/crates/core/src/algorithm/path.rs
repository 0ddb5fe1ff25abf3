//! Pattern formation on a path, and the snake that folds a rectangle into one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Dir, GridPoint};

use super::MoveDecision;

/// Boustrophedon Hamiltonian path over `[0, cols-1] x [0, rows-1]`: up
/// column 0, down column 1, and so on, starting at the origin.
pub fn snake_path(rows: i64, cols: i64) -> Vec<GridPoint> {
    let mut cells = Vec::with_capacity((rows.max(0) * cols.max(0)) as usize);
    for x in 0..cols {
        if x % 2 == 0 {
            cells.extend((0..rows).map(|y| GridPoint::new(x, y)));
        } else {
            cells.extend((0..rows).rev().map(|y| GridPoint::new(x, y)));
        }
    }
    cells
}

/// Position of `p` along a snake of the given height, if it lies on it.
pub fn snake_index(rows: i64, cols: i64, p: GridPoint) -> Option<usize> {
    if !(0..cols).contains(&p.x) || !(0..rows).contains(&p.y) {
        return None;
    }
    let along = if p.x % 2 == 0 { p.y } else { rows - 1 - p.y };
    Some((p.x * rows + along) as usize)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathInstance {
    pub cells: Vec<GridPoint>,
    /// Ascending path positions of the robots.
    pub robot_indices: Vec<usize>,
    /// Ascending path positions of the targets.
    pub target_indices: Vec<usize>,
}

impl PathInstance {
    /// Sorts the index lists and checks the instance is well formed.
    pub fn new(
        cells: Vec<GridPoint>,
        mut robot_indices: Vec<usize>,
        mut target_indices: Vec<usize>,
    ) -> Result<Self> {
        robot_indices.sort_unstable();
        target_indices.sort_unstable();
        let strictly_increasing = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]);
        if robot_indices.len() != target_indices.len()
            || !strictly_increasing(&robot_indices)
            || !strictly_increasing(&target_indices)
            || robot_indices
                .iter()
                .chain(&target_indices)
                .any(|&i| i >= cells.len())
        {
            return Err(Error::Internal("malformed path instance".into()));
        }
        Ok(PathInstance {
            cells,
            robot_indices,
            target_indices,
        })
    }

    /// Sum of the robots' distances to their targets along the path.
    pub fn total_displacement(&self) -> usize {
        self.robot_indices
            .iter()
            .zip(&self.target_indices)
            .map(|(&r, &t)| r.abs_diff(t))
            .sum()
    }

    /// The path position the robot at `self_index` moves to, if any. A robot
    /// heads for the target of the same rank and only steps onto an empty
    /// cell.
    pub fn next_index(&self, self_index: usize) -> Result<Option<usize>> {
        let rank = self
            .robot_indices
            .binary_search(&self_index)
            .map_err(|_| Error::Internal(format!("no robot at path index {self_index}")))?;
        let goal = self.target_indices[rank];
        let next = match goal.cmp(&self_index) {
            std::cmp::Ordering::Equal => return Ok(None),
            std::cmp::Ordering::Greater => self_index + 1,
            std::cmp::Ordering::Less => self_index - 1,
        };
        if self.robot_indices.binary_search(&next).is_ok() {
            Ok(None)
        } else {
            Ok(Some(next))
        }
    }
}

pub fn pf_on_path_step(p: &PathInstance, self_index: usize) -> Result<MoveDecision> {
    Ok(match p.next_index(self_index)? {
        None => MoveDecision::Stay,
        Some(next) => {
            let d = Dir::from_vector(p.cells[next] - p.cells[self_index])
                .ok_or_else(|| Error::Internal("path cells are not adjacent".into()))?;
            MoveDecision::Step(d)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(n: usize) -> Vec<GridPoint> {
        (0..n as i64).map(|x| GridPoint::new(x, 0)).collect()
    }

    #[test]
    fn snake_examples() {
        let p = |v: &[(i64, i64)]| v.iter().map(|&t| GridPoint::from(t)).collect::<Vec<_>>();
        assert_eq!(snake_path(2, 2), p(&[(0, 0), (0, 1), (1, 1), (1, 0)]));
        assert_eq!(snake_path(1, 3), p(&[(0, 0), (1, 0), (2, 0)]));
        assert_eq!(
            snake_path(3, 2),
            p(&[(0, 0), (0, 1), (0, 2), (1, 2), (1, 1), (1, 0)])
        );
    }

    #[test]
    fn snake_index_inverts_snake_path() {
        for (rows, cols) in [(1, 1), (3, 4), (5, 2), (4, 7)] {
            let cells = snake_path(rows, cols);
            for (i, c) in cells.iter().enumerate() {
                assert_eq!(snake_index(rows, cols, *c), Some(i));
            }
            for w in cells.windows(2) {
                assert_eq!(w[0].manhattan(w[1]), 1);
            }
            assert_eq!(snake_index(rows, cols, GridPoint::new(cols, 0)), None);
            assert_eq!(snake_index(rows, cols, GridPoint::new(0, rows)), None);
        }
    }

    #[test]
    fn only_front_robot_moves_when_packed() {
        let p = PathInstance::new(line(8), vec![0, 1, 2], vec![3, 4, 5]).unwrap();
        assert_eq!(
            pf_on_path_step(&p, 2).unwrap(),
            MoveDecision::Step(Dir::PosX)
        );
        assert_eq!(pf_on_path_step(&p, 1).unwrap(), MoveDecision::Stay);
        assert_eq!(pf_on_path_step(&p, 0).unwrap(), MoveDecision::Stay);
    }

    #[test]
    fn robots_converge_from_both_sides() {
        let p = PathInstance::new(line(8), vec![0, 4], vec![2, 3]).unwrap();
        assert_eq!(
            pf_on_path_step(&p, 4).unwrap(),
            MoveDecision::Step(Dir::NegX)
        );
        assert_eq!(
            pf_on_path_step(&p, 0).unwrap(),
            MoveDecision::Step(Dir::PosX)
        );
        assert_eq!(p.total_displacement(), 3);
    }

    #[test]
    fn robot_at_target_stays() {
        let p = PathInstance::new(line(4), vec![1], vec![1]).unwrap();
        assert_eq!(pf_on_path_step(&p, 1).unwrap(), MoveDecision::Stay);
        assert!(pf_on_path_step(&p, 2).is_err());
    }

    #[test]
    fn malformed_instances_rejected() {
        assert!(PathInstance::new(line(3), vec![0, 1], vec![2]).is_err());
        assert!(PathInstance::new(line(3), vec![0, 0], vec![1, 2]).is_err());
        assert!(PathInstance::new(line(3), vec![0], vec![3]).is_err());
    }
}
