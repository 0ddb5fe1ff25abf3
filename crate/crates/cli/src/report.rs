//! Single runs with their verdicts, and the report printed for them.

use std::collections::BTreeMap;
use std::time::Instant;

use anyhow::Result;
use gridpattern::scheduler::{
    make_adversary, run_with, AdversaryKind, Algorithm, Controller, FaultKind, Outcome, RunResult,
};
use gridpattern::target::TargetPattern;
use gridpattern::verify::{self, Verdict};
use gridpattern::{GridPoint, PointSet};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSettings {
    pub adversary: AdversaryKind,
    pub seed: u64,
    /// Fairness window; `None` means four events per robot.
    pub window: Option<usize>,
    pub max_events: u64,
}

impl RunSettings {
    pub fn window_for(&self, robots: usize) -> usize {
        self.window.unwrap_or(4 * robots)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub outcome: String,
    pub fault: Option<FaultKind>,
    pub detail: Option<String>,
    pub events: u64,
    pub robots: usize,
    pub final_config: Vec<GridPoint>,
    pub verdicts: BTreeMap<String, Verdict>,
    pub adversary: AdversaryKind,
    pub seed: u64,
    pub fairness_window: usize,
    pub max_events: u64,
    pub wall_time_ms: f64,
}

impl RunReport {
    pub fn all_verdicts_pass(&self) -> bool {
        self.verdicts.values().all(|v| v.passed)
    }

    /// 0 formed, 2 event limit, 3 fault.
    pub fn exit_code(&self) -> i32 {
        match self.outcome.as_str() {
            "FORMED" => 0,
            "LIMIT_EXCEEDED" => 2,
            _ => 3,
        }
    }
}

/// Checks a finished run: collision freedom, fairness and phase legality of
/// its trace, and formation of its final configuration.
pub fn verdicts(
    res: &RunResult,
    t: &TargetPattern,
    window: usize,
) -> Result<BTreeMap<String, Verdict>> {
    let mut v = BTreeMap::new();
    v.insert(
        "collision_free".to_string(),
        verify::check_collision_free(&res.trace)?,
    );
    v.insert(
        "fairness".to_string(),
        verify::check_fairness(&res.trace, res.initial.len(), window as u64),
    );
    v.insert(
        "phase_transitions".to_string(),
        verify::check_phase_transitions(&res.trace),
    );
    v.insert(
        "formed".to_string(),
        verify::check_formed(&res.final_config, t),
    );
    Ok(v)
}

pub fn execute(
    initial: &PointSet,
    t: &TargetPattern,
    s: &RunSettings,
) -> Result<(RunResult, RunReport)> {
    execute_with(initial, t, s, &Algorithm)
}

pub fn execute_with(
    initial: &PointSet,
    t: &TargetPattern,
    s: &RunSettings,
    controller: &impl Controller,
) -> Result<(RunResult, RunReport)> {
    let window = s.window_for(initial.len());
    let started = Instant::now();
    let adversary = make_adversary(s.adversary, s.seed, window, initial.len())?;
    let res = run_with(initial, t, adversary, s.max_events, controller)?;
    let elapsed = started.elapsed();
    let (fault, detail) = match &res.outcome {
        Outcome::Fault { fault, detail } => (Some(*fault), Some(detail.clone())),
        _ => (None, None),
    };
    let report = RunReport {
        outcome: res.outcome.name().to_string(),
        fault,
        detail,
        events: res.trace.len() as u64,
        robots: initial.len(),
        final_config: res.final_config.iter().collect(),
        verdicts: verdicts(&res, t, window)?,
        adversary: s.adversary,
        seed: s.seed,
        fairness_window: window,
        max_events: s.max_events,
        wall_time_ms: elapsed.as_secs_f64() * 1e3,
    };
    Ok((res, report))
}
