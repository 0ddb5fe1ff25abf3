//! Discrete-event ASYNC simulation.
//!
//! Each robot alternates LOOK (snapshot plus decision, atomic) and MOVE. The
//! adversary picks which robot acts at every event; a MOVE applies the
//! decision taken at the robot's last LOOK, however stale, to the current
//! world. Local frames are fixed per robot for the whole run.

pub mod adversary;
pub mod trace;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algorithm::{compute, plan, Decision, MoveDecision, Snapshot};
use crate::canonical::is_asymmetric;
use crate::conditions::Phase;
use crate::error::{Error, Result};
use crate::geometry::{similar, GridPoint, Isometry, PointSet};
use crate::target::TargetPattern;

pub use adversary::{make_adversary, Adversary, AdversaryKind};
pub use trace::{Event, EventKind, Trace};

use adversary::Slot;

/// The decision function robots run. The scheduler is generic over it so
/// that faulty rules can be injected in tests.
pub trait Controller {
    fn decide(&self, s: &Snapshot, t: &TargetPattern) -> Result<Decision>;
}

/// The pattern formation algorithm.
#[derive(Debug, Clone, Copy, Default)]
pub struct Algorithm;

impl Controller for Algorithm {
    fn decide(&self, s: &Snapshot, t: &TargetPattern) -> Result<Decision> {
        compute(s, t)
    }
}

impl<F> Controller for F
where
    F: Fn(&Snapshot, &TargetPattern) -> Result<Decision>,
{
    fn decide(&self, s: &Snapshot, t: &TargetPattern) -> Result<Decision> {
        self(s, t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Idle,
    Computed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pending {
    /// Index of the LOOK event the decision was taken at.
    pub look_index: u64,
    /// Global cell the robot will occupy after its MOVE.
    pub cell: GridPoint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RobotState {
    pub id: usize,
    pub pos: GridPoint,
    pub stage: Stage,
    pub pending: Option<Pending>,
    /// Linear map from global offsets to the robot's local coordinates.
    pub orientation: Isometry,
    /// Event index by which the robot must next move.
    pub deadline: u64,
    /// Look index of the last completed cycle, if that cycle stayed put.
    last_stay_look: Option<u64>,
}

impl RobotState {
    fn local_snapshot(&self, positions: &PointSet) -> Snapshot {
        let points = positions.map(|p| self.orientation.apply_linear(p - self.pos));
        Snapshot {
            points,
            self_pos: GridPoint::ORIGIN,
        }
    }

    fn resolve(&self, action: MoveDecision) -> GridPoint {
        match action {
            MoveDecision::Stay => self.pos,
            MoveDecision::Step(d) => self.pos.step(self.orientation.inverse().apply_dir(d)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FaultKind {
    Collision,
    SymmetricInput,
    StuckSymmetric,
    Internal,
}

impl fmt::Display for FaultKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FaultKind::Collision => "collision",
            FaultKind::SymmetricInput => "symmetric-input",
            FaultKind::StuckSymmetric => "stuck-symmetric",
            FaultKind::Internal => "internal",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    Formed { events: u64 },
    LimitExceeded,
    Fault { fault: FaultKind, detail: String },
}

impl Outcome {
    pub fn is_formed(&self) -> bool {
        matches!(self, Outcome::Formed { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Outcome::Formed { .. } => "FORMED",
            Outcome::LimitExceeded => "LIMIT_EXCEEDED",
            Outcome::Fault { .. } => "FAULT",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Formed { events } => write!(f, "FORMED after {events} events"),
            Outcome::LimitExceeded => f.write_str("LIMIT_EXCEEDED"),
            Outcome::Fault { fault, detail } => write!(f, "FAULT({fault}): {detail}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub outcome: Outcome,
    pub trace: Trace,
    pub initial: PointSet,
    pub final_config: PointSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepStatus {
    Running,
    Done(Outcome),
}

pub struct World {
    pub robots: Vec<RobotState>,
    pub target: TargetPattern,
    pub event_count: u64,
    adversary: Adversary,
    positions: PointSet,
    /// Index of the last MOVE that changed a position.
    last_change: Option<u64>,
    /// Phase of the current global configuration, recomputed after changes.
    phase_cache: Option<Phase>,
    pub trace: Trace,
}

impl World {
    /// Places one robot on each initial point, in ascending point order, and
    /// lets the adversary draw their local orientations.
    pub fn new(
        initial: &PointSet,
        target: TargetPattern,
        mut adversary: Adversary,
    ) -> Result<World> {
        if initial.len() != target.len() {
            return Err(Error::CardinalityMismatch {
                config: initial.len(),
                target: target.len(),
            });
        }
        if initial.is_empty() {
            return Err(Error::EmptyConfiguration);
        }
        let window = adversary.window() as usize;
        if window < 2 * initial.len() {
            return Err(Error::FairnessWindow {
                window,
                robots: initial.len(),
            });
        }
        let orientations = adversary.draw_orientations(initial.len());
        let robots = initial
            .iter()
            .zip(orientations)
            .enumerate()
            .map(|(id, (pos, orientation))| RobotState {
                id,
                pos,
                stage: Stage::Idle,
                pending: None,
                orientation,
                deadline: adversary.initial_deadline(),
                last_stay_look: None,
            })
            .collect();
        Ok(World {
            robots,
            target,
            event_count: 0,
            adversary,
            positions: initial.clone(),
            last_change: None,
            phase_cache: None,
            trace: Vec::new(),
        })
    }

    pub fn positions(&self) -> &PointSet {
        &self.positions
    }

    pub fn adversary(&self) -> &Adversary {
        &self.adversary
    }

    fn global_phase(&mut self) -> Result<Phase> {
        if let Some(p) = self.phase_cache {
            return Ok(p);
        }
        let p = plan(&self.positions, &self.target)?.phase;
        self.phase_cache = Some(p);
        Ok(p)
    }

    /// True once every robot has completed a cycle that looked at the
    /// current configuration and stayed.
    fn quiescent(&self) -> bool {
        self.robots
            .iter()
            .all(|r| match (r.last_stay_look, self.last_change) {
                (None, _) => false,
                (Some(_), None) => true,
                (Some(look), Some(change)) => look > change,
            })
    }

    fn fault(kind: FaultKind, detail: impl Into<String>) -> StepStatus {
        StepStatus::Done(Outcome::Fault {
            fault: kind,
            detail: detail.into(),
        })
    }

    /// Performs exactly one event.
    pub fn step(&mut self, controller: &impl Controller) -> StepStatus {
        let now = self.event_count;
        let slots: Vec<Slot> = self
            .robots
            .iter()
            .map(|r| Slot {
                computed: r.stage == Stage::Computed,
                deadline: r.deadline,
            })
            .collect();
        let i = self.adversary.choose(&slots, now);
        self.event_count += 1;

        match self.robots[i].stage {
            Stage::Idle => {
                let phase = match self.global_phase() {
                    Ok(p) => p,
                    Err(e) => return Self::fault(FaultKind::Internal, e.to_string()),
                };
                let r = &self.robots[i];
                let decision = match controller
                    .decide(&r.local_snapshot(&self.positions), &self.target)
                {
                    Ok(d) => d,
                    Err(e) => return Self::fault(FaultKind::Internal, format!("robot {i}: {e}")),
                };
                let cell = r.resolve(decision.action);
                self.trace.push(Event {
                    index: now,
                    robot: i,
                    kind: EventKind::Look,
                    from: r.pos,
                    to: None,
                    phase: Some(phase),
                });
                let r = &mut self.robots[i];
                r.stage = Stage::Computed;
                r.pending = Some(Pending {
                    look_index: now,
                    cell,
                });
            }
            Stage::Computed => {
                let pending = self.robots[i]
                    .pending
                    .take()
                    .expect("computed robot has a pending move");
                let from = self.robots[i].pos;
                self.trace.push(Event {
                    index: now,
                    robot: i,
                    kind: EventKind::Move,
                    from,
                    to: Some(pending.cell),
                    phase: None,
                });
                if pending.cell != from {
                    if self.positions.contains(&pending.cell) {
                        return Self::fault(
                            FaultKind::Collision,
                            format!("robot {i} moved from {from} onto occupied {}", pending.cell),
                        );
                    }
                    self.positions.remove(&from);
                    self.positions.insert(pending.cell);
                    self.last_change = Some(now);
                    self.phase_cache = None;
                }
                let r = &mut self.robots[i];
                r.pos = pending.cell;
                r.stage = Stage::Idle;
                r.deadline = now + self.adversary.window();
                r.last_stay_look = (pending.cell == from).then_some(pending.look_index);
            }
        }

        if !self.quiescent() {
            return StepStatus::Running;
        }
        if similar(&self.positions, &self.target.points).is_some() {
            return StepStatus::Done(Outcome::Formed {
                events: self.event_count,
            });
        }
        match is_asymmetric(&self.positions) {
            Ok(false) => Self::fault(
                FaultKind::StuckSymmetric,
                "symmetric configuration, no robot moves",
            ),
            Ok(true) => Self::fault(
                FaultKind::Internal,
                "deadlock: every robot stays but the pattern is not formed",
            ),
            Err(e) => Self::fault(FaultKind::Internal, e.to_string()),
        }
    }
}

/// Runs the algorithm from `initial` until it forms the pattern, faults or
/// exhausts `max_events`.
pub fn run(
    initial: &PointSet,
    target: &TargetPattern,
    adversary: Adversary,
    max_events: u64,
) -> Result<RunResult> {
    run_with(initial, target, adversary, max_events, &Algorithm)
}

pub fn run_with(
    initial: &PointSet,
    target: &TargetPattern,
    adversary: Adversary,
    max_events: u64,
    controller: &impl Controller,
) -> Result<RunResult> {
    let mut world = World::new(initial, target.clone(), adversary)?;
    let finish = |world: World, outcome: Outcome| RunResult {
        outcome,
        final_config: world.positions,
        trace: world.trace,
        initial: initial.clone(),
    };
    if initial.len() >= 2 && !is_asymmetric(initial)? {
        return Ok(finish(
            world,
            Outcome::Fault {
                fault: FaultKind::SymmetricInput,
                detail: "initial configuration is symmetric".into(),
            },
        ));
    }
    while world.event_count < max_events {
        if let StepStatus::Done(outcome) = world.step(controller) {
            return Ok(finish(world, outcome));
        }
    }
    Ok(finish(world, Outcome::LimitExceeded))
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

    fn adv(kind: AdversaryKind, seed: u64, k: usize) -> Adversary {
        make_adversary(kind, seed, 4 * k, k).unwrap()
    }

    #[test]
    fn formed_start_finishes_after_one_round() {
        let t = canonicalize_target(&eleven()).unwrap();
        let start = eleven().translate(GridPoint::new(-4, 9));
        let res = run(&start, &t, adv(AdversaryKind::RoundRobin, 0, 11), 1000).unwrap();
        assert_eq!(res.outcome, Outcome::Formed { events: 22 });
        assert_eq!(res.final_config, start);
    }

    #[test]
    fn pair_is_symmetric_input() {
        let t = canonicalize_target(&PointSet::from([(0, 0), (1, 0)])).unwrap();
        let res = run(
            &PointSet::from([(0, 0), (1, 0)]),
            &t,
            adv(AdversaryKind::Random, 1, 2),
            100,
        )
        .unwrap();
        assert!(matches!(
            res.outcome,
            Outcome::Fault {
                fault: FaultKind::SymmetricInput,
                ..
            }
        ));
        assert!(res.trace.is_empty());
    }

    #[test]
    fn eleven_to_line_under_every_adversary() {
        let t = canonicalize_target(&(0..11).map(|i| GridPoint::new(i, 0)).collect()).unwrap();
        for kind in AdversaryKind::ALL {
            let res = run(&eleven(), &t, adv(kind, 5, 11), 100_000).unwrap();
            assert!(res.outcome.is_formed(), "{kind}: {}", res.outcome);
            assert!(similar(&res.final_config, &t.points).is_some());
        }
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let t = canonicalize_target(&PointSet::from([(0, 0), (2, 0), (1, 1), (3, 3)])).unwrap();
        let start = PointSet::from([(0, 0), (1, 0), (3, 1), (0, 2)]);
        let a = run(&start, &t, adv(AdversaryKind::Random, 7, 4), 50_000).unwrap();
        let b = run(&start, &t, adv(AdversaryKind::Random, 7, 4), 50_000).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cardinality_and_window_errors() {
        let t = canonicalize_target(&PointSet::from([(0, 0), (2, 0), (1, 1)])).unwrap();
        let start = PointSet::from([(0, 0), (1, 0)]);
        assert!(run(&start, &t, adv(AdversaryKind::Random, 0, 2), 10).is_err());
        let small = make_adversary(AdversaryKind::Random, 0, 4, 2).unwrap();
        let three = PointSet::from([(0, 0), (1, 0), (3, 1)]);
        assert!(matches!(
            run(&three, &t, small, 10),
            Err(Error::FairnessWindow { .. })
        ));
    }

    #[test]
    fn stay_move_is_positional_noop() {
        let t = canonicalize_target(&eleven()).unwrap();
        let res = run(&eleven(), &t, adv(AdversaryKind::Random, 3, 11), 1000).unwrap();
        for e in res.trace.iter().filter(|e| e.kind == EventKind::Move) {
            assert_eq!(e.to, Some(e.from));
        }
    }

    #[test]
    fn injected_collision_is_reported() {
        // Every robot steps to its local +x: robots in a row run into each other.
        let reckless = |_: &Snapshot, _: &TargetPattern| {
            Ok(Decision {
                action: MoveDecision::Step(crate::geometry::Dir::PosX),
                phase: Phase::P1,
                flag: None,
            })
        };
        let t = canonicalize_target(&PointSet::from([(0, 0), (5, 0), (1, 1)])).unwrap();
        let start = PointSet::from([(0, 0), (1, 0), (3, 2)]);
        let mut hit = false;
        for seed in 0..20 {
            let res = run_with(
                &start,
                &t,
                adv(AdversaryKind::Random, seed, 3),
                2000,
                &reckless,
            )
            .unwrap();
            hit |= matches!(
                res.outcome,
                Outcome::Fault {
                    fault: FaultKind::Collision,
                    ..
                }
            );
        }
        assert!(hit);
    }
}
