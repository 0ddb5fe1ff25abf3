//! Post-hoc checkers over traces and independent oracles.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algorithm::path::{pf_on_path_step, PathInstance};
use crate::algorithm::{compute, plan, MoveDecision, Snapshot};
use crate::canonical::{
    brute_force_symmetries, canonical_frames, is_asymmetric, trivial_symmetries, Frame,
};
use crate::conditions::Phase;
use crate::error::{Error, Result};
use crate::geometry::{apply_isometry, similar, GridPoint, Isometry, PointSet};
use crate::scheduler::{Event, EventKind};
use crate::target::TargetPattern;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// Event the violation was detected at, if it is tied to one.
    pub index: Option<u64>,
    pub rule: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "[{}] at event {}: {}", self.rule, i, self.detail),
            None => write!(f, "[{}] {}", self.rule, self.detail),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub passed: bool,
    pub violations: Vec<Violation>,
}

impl Verdict {
    pub fn from_violations(violations: Vec<Violation>) -> Verdict {
        Verdict {
            passed: violations.is_empty(),
            violations,
        }
    }

    pub fn pass() -> Verdict {
        Verdict::from_violations(Vec::new())
    }

    fn single(index: Option<u64>, rule: &str, detail: impl Into<String>) -> Verdict {
        Verdict::from_violations(vec![Violation {
            index,
            rule: rule.to_string(),
            detail: detail.into(),
        }])
    }

    pub fn merge(mut self, other: Verdict) -> Verdict {
        self.violations.extend(other.violations);
        self.passed = self.violations.is_empty();
        self
    }
}

/// Each robot's position before its first event.
pub fn initial_positions(trace: &[Event]) -> BTreeMap<usize, GridPoint> {
    let mut first = BTreeMap::new();
    for e in trace {
        first.entry(e.robot).or_insert(e.from);
    }
    first
}

/// Replays the trace, calling `on_event` with the positions after each
/// event. Fails on records that contradict the replay (wrong `from`, a MOVE
/// without a preceding LOOK, a LOOK with a target).
fn replay(
    trace: &[Event],
    mut on_event: impl FnMut(&Event, &BTreeMap<usize, GridPoint>),
) -> Result<BTreeMap<usize, GridPoint>> {
    let mut pos = initial_positions(trace);
    let mut looked: BTreeMap<usize, bool> = BTreeMap::new();
    for (n, e) in trace.iter().enumerate() {
        if e.index != n as u64 {
            return Err(Error::MalformedTrace(format!(
                "event {n} carries index {}",
                e.index
            )));
        }
        if pos[&e.robot] != e.from {
            return Err(Error::MalformedTrace(format!(
                "event {n}: robot {} is at {}, record says {}",
                e.robot, pos[&e.robot], e.from
            )));
        }
        let pending = looked.entry(e.robot).or_insert(false);
        match (e.kind, e.to) {
            (EventKind::Look, None) if !*pending => *pending = true,
            (EventKind::Move, Some(to)) if *pending => {
                *pending = false;
                pos.insert(e.robot, to);
            }
            _ => {
                return Err(Error::MalformedTrace(format!(
                    "event {n}: {:?} out of the look/move alternation of robot {}",
                    e.kind, e.robot
                )))
            }
        }
        on_event(e, &pos);
    }
    Ok(pos)
}

/// Positions of all robots after the last event.
pub fn final_configuration(trace: &[Event]) -> Result<PointSet> {
    Ok(replay(trace, |_, _| {})?.into_values().collect())
}

/// Replays the trace and flags every event after which two robots share a
/// cell, and every move that is not to a neighbouring cell.
pub fn check_collision_free(trace: &[Event]) -> Result<Verdict> {
    let mut violations = Vec::new();
    let start = initial_positions(trace);
    let distinct: PointSet = start.values().copied().collect();
    if distinct.len() != start.len() {
        violations.push(Violation {
            index: None,
            rule: "collision".into(),
            detail: "two robots start on the same cell".into(),
        });
    }
    replay(trace, |e, pos| {
        if let (EventKind::Move, Some(to)) = (e.kind, e.to) {
            if e.from.manhattan(to) > 1 {
                violations.push(Violation {
                    index: Some(e.index),
                    rule: "unit-step".into(),
                    detail: format!("robot {} jumped {} -> {}", e.robot, e.from, to),
                });
            }
            if pos.iter().any(|(&r, &p)| r != e.robot && p == to) {
                violations.push(Violation {
                    index: Some(e.index),
                    rule: "collision".into(),
                    detail: format!("robot {} moved onto occupied {}", e.robot, to),
                });
            }
        }
    })?;
    Ok(Verdict::from_violations(violations))
}

pub fn check_formed(final_config: &PointSet, t: &TargetPattern) -> Verdict {
    if similar(final_config, &t.points).is_some() {
        Verdict::pass()
    } else {
        Verdict::single(
            None,
            "formed",
            "final configuration is not similar to the pattern",
        )
    }
}

/// Edges of the phase transition graph.
pub fn allowed_transition(from: Phase, to: Phase) -> bool {
    use Phase::*;
    matches!(
        (from, to),
        (P1, P2 | P3 | P4 | P5 | P6)
            | (P2, P3 | P4 | P5)
            | (P3, P4 | P1)
            | (P4, P5)
            | (P5, P6 | P7)
            | (P6, P7)
            | (P7, Done)
    )
}

/// Phases annotated at LOOK events with consecutive repeats collapsed, each
/// paired with the index of the event it was first seen at.
pub fn phase_sequence(trace: &[Event]) -> Vec<(u64, Phase)> {
    let mut seq: Vec<(u64, Phase)> = Vec::new();
    for e in trace {
        if let Some(p) = e.phase {
            if seq.last().map(|&(_, q)| q) != Some(p) {
                seq.push((e.index, p));
            }
        }
    }
    seq
}

pub fn check_phase_transitions(trace: &[Event]) -> Verdict {
    let seq = phase_sequence(trace);
    let violations = seq
        .windows(2)
        .filter(|w| !allowed_transition(w[0].1, w[1].1))
        .map(|w| Violation {
            index: Some(w[1].0),
            rule: "phase-transition".into(),
            detail: format!("{} -> {} is not an edge", w[0].1, w[1].1),
        })
        .collect();
    Verdict::from_violations(violations)
}

/// Number of 3 -> 1 transitions in the collapsed phase sequence.
pub fn back_edges(trace: &[Event]) -> usize {
    phase_sequence(trace)
        .windows(2)
        .filter(|w| (w[0].1, w[1].1) == (Phase::P3, Phase::P1))
        .count()
}

/// Every robot moves at least once in every window of `window` events.
pub fn check_fairness(trace: &[Event], robots: usize, window: u64) -> Verdict {
    let len = trace.len() as u64;
    let mut moves: Vec<Vec<u64>> = vec![Vec::new(); robots];
    for e in trace.iter().filter(|e| e.kind == EventKind::Move) {
        if let Some(m) = moves.get_mut(e.robot) {
            m.push(e.index);
        }
    }
    let mut violations = Vec::new();
    for (r, m) in moves.iter().enumerate() {
        // Sentinels just outside the trace bound the first and last gaps.
        let marks: Vec<i128> = std::iter::once(-1)
            .chain(m.iter().map(|&i| i as i128))
            .chain(std::iter::once(len as i128))
            .collect();
        if let Some(w) = marks.windows(2).find(|w| w[1] - w[0] > window as i128) {
            violations.push(Violation {
                index: Some((w[0] + window as i128) as u64),
                rule: "fairness".into(),
                detail: format!(
                    "robot {r} has no move in events {}..={}",
                    w[0] + 1,
                    w[0] + window as i128
                ),
            });
        }
    }
    Verdict::from_violations(violations)
}

/// MOVEs executed on a stale snapshot: some other robot changed position
/// between the mover's LOOK and its MOVE.
pub fn stale_moves(trace: &[Event]) -> usize {
    let mut last_look: BTreeMap<usize, u64> = BTreeMap::new();
    let mut last_change: Option<u64> = None;
    let mut changes: Vec<(u64, usize)> = Vec::new();
    let mut stale = 0;
    for e in trace {
        match e.kind {
            EventKind::Look => {
                last_look.insert(e.robot, e.index);
            }
            EventKind::Move => {
                let look = last_look.get(&e.robot).copied().unwrap_or(0);
                if last_change.is_some_and(|c| c > look)
                    && changes
                        .iter()
                        .rev()
                        .take_while(|&&(i, _)| i > look)
                        .any(|&(_, r)| r != e.robot)
                {
                    stale += 1;
                }
                if e.to.is_some_and(|to| to != e.from) {
                    last_change = Some(e.index);
                    changes.push((e.index, e.robot));
                }
            }
        }
    }
    stale
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathOracleReport {
    /// Σ |robot_index - target_index|.
    pub expected_steps: usize,
    /// Activation orders simulated.
    pub orders: usize,
    pub verdict: Verdict,
}

/// The move the oracle expects from the robot at path position `at`:
/// one position toward the target of equal rank, if that cell is free.
fn oracle_next(robots: &[usize], targets: &[usize], rank: usize) -> Option<usize> {
    let at = robots[rank];
    let goal = targets[rank];
    let next = if goal > at {
        at + 1
    } else if goal < at {
        at - 1
    } else {
        return None;
    };
    (!robots.contains(&next)).then_some(next)
}

/// Simulates one order of sequential activations and returns the number of
/// executed steps, or a description of what went wrong.
fn simulate_order(p: &PathInstance, order: &[usize]) -> std::result::Result<usize, String> {
    let mut robots = p.robot_indices.clone();
    let mut remaining: usize = p.total_displacement();
    let mut steps = 0;
    loop {
        let mut moved = false;
        for &rank in order {
            let at = robots[rank];
            let current =
                PathInstance::new(p.cells.clone(), robots.clone(), p.target_indices.clone())
                    .map_err(|e| e.to_string())?;
            let decision = pf_on_path_step(&current, at).map_err(|e| e.to_string())?;
            let expected = oracle_next(&robots, &p.target_indices, rank);
            let taken = match decision {
                MoveDecision::Stay => None,
                MoveDecision::Step(d) => {
                    let to = p.cells[at].step(d);
                    let idx = [at.wrapping_sub(1), at + 1]
                        .into_iter()
                        .find(|&i| i < p.cells.len() && p.cells[i] == to)
                        .ok_or_else(|| format!("robot at {at} stepped off the path to {to}"))?;
                    Some(idx)
                }
            };
            if taken != expected {
                return Err(format!(
                    "robot at {at}: decided {taken:?}, oracle expects {expected:?}"
                ));
            }
            if let Some(next) = taken {
                if robots.contains(&next) {
                    return Err(format!("robot at {at} stepped onto occupied {next}"));
                }
                robots[rank] = next;
                if robots.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(format!("robots swapped order stepping {at} -> {next}"));
                }
                let total: usize = robots
                    .iter()
                    .zip(&p.target_indices)
                    .map(|(&r, &t)| r.abs_diff(t))
                    .sum();
                if total + 1 != remaining {
                    return Err(format!("displacement went {remaining} -> {total}"));
                }
                remaining = total;
                steps += 1;
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    if robots != p.target_indices {
        return Err(format!("deadlock with robots at {robots:?}"));
    }
    Ok(steps)
}

/// Runs the path algorithm under every activation order of up to six
/// robots, or `samples` random orders for more.
pub fn oracle_pf_on_path(p: &PathInstance, samples: usize, seed: u64) -> PathOracleReport {
    let k = p.robot_indices.len();
    let expected = p.total_displacement();
    let orders: Vec<Vec<usize>> = if k <= 6 {
        permutations(k)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples)
            .map(|_| {
                let mut o: Vec<usize> = (0..k).collect();
                o.shuffle(&mut rng);
                o
            })
            .collect()
    };
    let mut violations = Vec::new();
    for order in &orders {
        match simulate_order(p, order) {
            Ok(steps) if steps == expected => {}
            Ok(steps) => violations.push(Violation {
                index: None,
                rule: "path-steps".into(),
                detail: format!("order {order:?}: {steps} steps, expected {expected}"),
            }),
            Err(detail) => violations.push(Violation {
                index: None,
                rule: "path-run".into(),
                detail: format!("order {order:?}: {detail}"),
            }),
        }
    }
    PathOracleReport {
        expected_steps: expected,
        orders: orders.len(),
        verdict: Verdict::from_violations(violations),
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// Compares the string-based asymmetry test with the brute-force search
/// for symmetries.
pub fn cross_check_asymmetry(c: &PointSet) -> Result<Verdict> {
    let by_strings = is_asymmetric(c)?;
    let symmetries = brute_force_symmetries(c)?;
    Ok(if by_strings == symmetries.is_empty() {
        Verdict::pass()
    } else {
        Verdict::single(
            None,
            "asymmetry",
            format!(
                "strings say asymmetric={by_strings}, brute force finds {} symmetries",
                symmetries.len()
            ),
        )
    })
}

/// Where every robot ends up after one cycle, each robot computing in its
/// own local orientation. Sorted by starting cell.
pub fn physical_moves(
    c: &PointSet,
    t: &TargetPattern,
    orientations: &[Isometry],
) -> Result<Vec<(GridPoint, GridPoint)>> {
    c.iter()
        .zip(orientations)
        .map(|(pos, o)| {
            let local = c.map(|p| o.apply_linear(p - pos));
            let d = compute(&Snapshot::new(local, GridPoint::ORIGIN)?, t)?;
            let to = match d.action {
                MoveDecision::Stay => pos,
                MoveDecision::Step(dir) => pos.step(o.inverse().apply_dir(dir)),
            };
            Ok((pos, to))
        })
        .collect()
}

/// Compares the moves computed on `c` and on `g(c)`, each robot under the
/// given local orientations. The moves on `g(c)` must be the `g`-image of
/// those on `c`, up to a symmetry of `g(c)` that fixes every robot.
pub fn check_frame_invariance(
    c: &PointSet,
    t: &TargetPattern,
    g: &Isometry,
    before: &[Isometry],
    after: &[Isometry],
) -> Result<Verdict> {
    let moved = apply_isometry(g, c);
    let base = physical_moves(c, t, before)?;
    let image = physical_moves(&moved, t, after)?;
    let mut fixers = vec![Isometry::IDENTITY];
    fixers.extend(trivial_symmetries(&moved)?);
    let matches = fixers.iter().any(|s| {
        let mut expected: Vec<(GridPoint, GridPoint)> = base
            .iter()
            .map(|&(a, b)| (s.apply(g.apply(a)), s.apply(g.apply(b))))
            .collect();
        expected.sort();
        expected == image
    });
    Ok(if matches {
        Verdict::pass()
    } else {
        Verdict::single(
            None,
            "frame-invariance",
            format!("moves {base:?} under {g:?} became {image:?}"),
        )
    })
}

fn same_frame(a: &Frame, b: &Frame) -> bool {
    a.origin == b.origin
        && a.x_dir == b.x_dir
        && (a.y_dir.is_none() || b.y_dir.is_none() || a.y_dir == b.y_dir)
}

/// What one prescribed move did to a configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseStepCheck {
    pub phase: Phase,
    /// Moves examined, each applied on its own.
    pub moves: usize,
    /// Moves after which the frame changed and the phase fell back to 1.
    pub fallbacks: usize,
    pub verdict: Verdict,
}

/// For a configuration in phase 1, 2, 3 without a reflective rest, or 4,
/// applies each prescribed move on its own and checks that the result is
/// still asymmetric with the same canonical frame. A move in phase 3 may
/// instead change the frame if the new configuration is back in phase 1.
/// Returns `None` for configurations outside those phases.
pub fn check_phase_step(c: &PointSet, t: &TargetPattern) -> Result<Option<PhaseStepCheck>> {
    if !is_asymmetric(c)? {
        return Ok(None);
    }
    let p = plan(c, t)?;
    let cv = match p.conditions {
        Some(cv) => cv,
        None => return Ok(None),
    };
    let eligible = match p.phase {
        Phase::P1 | Phase::P2 | Phase::P4 => true,
        Phase::P3 => !cv.c8,
        _ => false,
    };
    if !eligible {
        return Ok(None);
    }
    let frames = canonical_frames(c)?;
    let mut violations = Vec::new();
    let mut fallbacks = 0;
    if p.moves.is_empty() {
        violations.push(Violation {
            index: None,
            rule: "phase-step".into(),
            detail: format!("{} prescribes no move", p.phase),
        });
    }
    for &(from, dir) in &p.moves {
        let to = from.step(dir);
        if c.contains(&to) {
            violations.push(Violation {
                index: None,
                rule: "phase-step".into(),
                detail: format!("{}: move {from} -> {to} onto a robot", p.phase),
            });
            continue;
        }
        let mut next = c.without(&from);
        next.insert(to);
        if !is_asymmetric(&next)? {
            violations.push(Violation {
                index: None,
                rule: "phase-step".into(),
                detail: format!(
                    "{}: move {from} -> {to} made the configuration symmetric",
                    p.phase
                ),
            });
            continue;
        }
        let next_frames = canonical_frames(&next)?;
        let kept = frames
            .iter()
            .any(|f| next_frames.iter().any(|g| same_frame(f, g)));
        if kept {
            continue;
        }
        if p.phase == Phase::P3 && plan(&next, t)?.phase == Phase::P1 {
            fallbacks += 1;
            continue;
        }
        violations.push(Violation {
            index: None,
            rule: "phase-step".into(),
            detail: format!(
                "{}: move {from} -> {to} changed the frame from {} to {}",
                p.phase, frames[0], next_frames[0]
            ),
        });
    }
    Ok(Some(PhaseStepCheck {
        phase: p.phase,
        moves: p.moves.len(),
        fallbacks,
        verdict: Verdict::from_violations(violations),
    }))
}
