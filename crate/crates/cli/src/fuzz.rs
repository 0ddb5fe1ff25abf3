//! Batches of end-to-end runs on random inputs.

use std::collections::{BTreeMap, BTreeSet};

use anyhow::{bail, Result};
use gridpattern::scheduler::{AdversaryKind, Algorithm, Controller, FaultKind};
use gridpattern::target::canonicalize_target;
use gridpattern::verify::{back_edges, phase_sequence};
use gridpattern::PointSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::report::{execute_with, RunSettings};
use crate::sample::{random_asymmetric, random_points};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzOptions {
    pub runs: usize,
    pub k_min: usize,
    pub k_max: usize,
    /// Side of the box initial configurations and patterns are drawn from.
    pub side: i64,
    pub seed: u64,
    pub max_events: u64,
    /// Fairness window per robot.
    pub window_per_robot: usize,
}

impl Default for FuzzOptions {
    fn default() -> Self {
        FuzzOptions {
            runs: 500,
            k_min: 3,
            k_max: 12,
            side: 12,
            seed: 0,
            max_events: 100_000,
            window_per_robot: 4,
        }
    }
}

/// Everything needed to repeat one run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzCase {
    pub index: usize,
    pub initial: PointSet,
    pub pattern: PointSet,
    pub adversary: AdversaryKind,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzRecord {
    pub index: usize,
    pub robots: usize,
    pub adversary: AdversaryKind,
    pub seed: u64,
    pub outcome: String,
    pub fault: Option<FaultKind>,
    pub events: u64,
    pub back_edges: usize,
    /// Distinct phase transitions seen, as "P1->P3".
    pub transitions: BTreeSet<String>,
    pub failed_verdicts: Vec<String>,
    pub wall_time_ms: f64,
}

impl FuzzRecord {
    pub fn ok(&self) -> bool {
        self.outcome == "FORMED" && self.failed_verdicts.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub runs: usize,
    pub formed: usize,
    pub limit_exceeded: usize,
    pub collisions: usize,
    pub stuck_symmetric: usize,
    pub other_faults: usize,
    pub verdict_failures: usize,
    pub runs_with_back_edges: usize,
    /// Runs with a 3 -> 1 transition that still formed the pattern.
    pub back_edge_runs_formed: usize,
    /// For each observed phase transition, the number of runs showing it.
    pub transitions: BTreeMap<String, usize>,
    pub max_events_used: u64,
    /// Failing runs, sorted by index.
    pub failures: Vec<FuzzRecord>,
}

impl FuzzSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Draws the cases of a batch. Adversaries rotate with the run index so
/// each kind gets a third of the runs.
pub fn cases(opts: &FuzzOptions) -> Result<Vec<FuzzCase>> {
    if opts.k_min < 3 || opts.k_min > opts.k_max {
        bail!(
            "robot range {}..{} must start at 3 or more",
            opts.k_min,
            opts.k_max
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    (0..opts.runs)
        .map(|index| {
            let k = rng.gen_range(opts.k_min..=opts.k_max);
            Ok(FuzzCase {
                index,
                initial: random_asymmetric(&mut rng, k, opts.side)?,
                pattern: random_points(&mut rng, k, opts.side)?,
                adversary: AdversaryKind::ALL[index % AdversaryKind::ALL.len()],
                seed: rng.gen(),
            })
        })
        .collect()
}

pub fn run_case(
    case: &FuzzCase,
    opts: &FuzzOptions,
    controller: &impl Controller,
) -> Result<FuzzRecord> {
    let t = canonicalize_target(&case.pattern)?;
    let settings = RunSettings {
        adversary: case.adversary,
        seed: case.seed,
        window: Some(opts.window_per_robot * case.initial.len()),
        max_events: opts.max_events,
    };
    let (res, report) = execute_with(&case.initial, &t, &settings, controller)?;
    Ok(FuzzRecord {
        index: case.index,
        robots: case.initial.len(),
        adversary: case.adversary,
        seed: case.seed,
        outcome: report.outcome.clone(),
        fault: report.fault,
        events: report.events,
        back_edges: back_edges(&res.trace),
        transitions: phase_sequence(&res.trace)
            .windows(2)
            .map(|w| format!("{}->{}", w[0].1, w[1].1))
            .collect(),
        failed_verdicts: report
            .verdicts
            .iter()
            .filter(|(_, v)| !v.passed)
            .map(|(name, _)| name.clone())
            .collect(),
        wall_time_ms: report.wall_time_ms,
    })
}

pub fn fuzz(opts: &FuzzOptions) -> Result<FuzzSummary> {
    fuzz_with(opts, &Algorithm)
}

/// Runs the batch in parallel; the summary does not depend on scheduling.
pub fn fuzz_with(opts: &FuzzOptions, controller: &(impl Controller + Sync)) -> Result<FuzzSummary> {
    let cases = cases(opts)?;
    let mut records = cases
        .par_iter()
        .map(|c| run_case(c, opts, controller))
        .collect::<Result<Vec<_>>>()?;
    records.sort_by_key(|r| r.index);
    Ok(summarize(records))
}

pub fn summarize(records: Vec<FuzzRecord>) -> FuzzSummary {
    let count = |f: &dyn Fn(&FuzzRecord) -> bool| records.iter().filter(|r| f(r)).count();
    FuzzSummary {
        runs: records.len(),
        formed: count(&|r| r.outcome == "FORMED"),
        limit_exceeded: count(&|r| r.outcome == "LIMIT_EXCEEDED"),
        collisions: count(&|r| r.fault == Some(FaultKind::Collision)),
        stuck_symmetric: count(&|r| r.fault == Some(FaultKind::StuckSymmetric)),
        other_faults: count(&|r| {
            matches!(
                r.fault,
                Some(FaultKind::Internal | FaultKind::SymmetricInput)
            )
        }),
        verdict_failures: count(&|r| !r.failed_verdicts.is_empty()),
        runs_with_back_edges: count(&|r| r.back_edges > 0),
        back_edge_runs_formed: count(&|r| r.back_edges > 0 && r.outcome == "FORMED"),
        transitions: records.iter().flat_map(|r| r.transitions.iter()).fold(
            BTreeMap::new(),
            |mut m, e| {
                *m.entry(e.clone()).or_insert(0) += 1;
                m
            },
        ),
        max_events_used: records.iter().map(|r| r.events).max().unwrap_or(0),
        failures: records.into_iter().filter(|r| !r.ok()).collect(),
    }
}
