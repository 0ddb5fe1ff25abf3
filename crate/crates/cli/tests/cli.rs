use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gridpattern::algorithm::{compute, Decision, MoveDecision, Snapshot};
use gridpattern::canonical::is_asymmetric;
use gridpattern::conditions::Phase;
use gridpattern::target::TargetPattern;
use gridpattern::{GridPoint, PointSet};
use gridpattern_cli::config_file::{format_config, parse_config};
use gridpattern_cli::fuzz::{fuzz_with, FuzzOptions};
use tempfile::TempDir;

const ELEVEN: &str = "0 1\n0 3\n1 2\n2 0\n3 3\n3 5\n4 0\n4 5\n5 1\n6 4\n7 2\n";

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gridpattern"))
        .args(args)
        .output()
        .expect("run the binary")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn line(k: i64) -> String {
    (0..k).map(|i| format!("{i} 0\n")).collect()
}

#[test]
fn run_forms_the_line_and_the_trace_verifies() {
    let dir = TempDir::new().unwrap();
    let config = write(&dir, "c.txt", ELEVEN);
    let target = write(&dir, "t.txt", &line(11));
    let trace = dir.path().join("trace.jsonl");
    let out = bin(&[
        "run",
        "--config",
        s(&config),
        "--target",
        s(&target),
        "--adversary",
        "stale",
        "--seed",
        "3",
        "--trace",
        s(&trace),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["outcome"], "FORMED");
    let mut keys: Vec<&str> = report
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    keys.sort();
    assert_eq!(
        keys,
        [
            "adversary",
            "detail",
            "events",
            "fairness_window",
            "fault",
            "final_config",
            "max_events",
            "outcome",
            "robots",
            "seed",
            "verdicts",
            "wall_time_ms"
        ]
    );
    let verify = bin(&["verify", "--trace", s(&trace), "--target", s(&target)]);
    assert_eq!(
        verify.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&verify.stdout)
    );
}

#[test]
fn already_formed_start_exits_zero() {
    let dir = TempDir::new().unwrap();
    let config = write(&dir, "c.txt", "0 0\n1 0\n2 0\n0 1\n");
    let target = write(&dir, "t.txt", "5 5\n5 6\n5 7\n6 7\n");
    let out = bin(&["run", "--config", s(&config), "--target", s(&target)]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["outcome"], "FORMED");
}

#[test]
fn symmetric_input_exits_three() {
    let dir = TempDir::new().unwrap();
    let config = write(&dir, "c.txt", "0 0\n3 0\n");
    let target = write(&dir, "t.txt", "0 0\n1 0\n");
    let out = bin(&["run", "--config", s(&config), "--target", s(&target)]);
    assert_eq!(out.status.code(), Some(3));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["fault"], "symmetric-input");
}

#[test]
fn bad_input_exits_one() {
    let dir = TempDir::new().unwrap();
    let config = write(&dir, "c.txt", "0 0\n1 x\n");
    let target = write(&dir, "t.txt", "0 0\n1 0\n");
    assert_eq!(
        bin(&["run", "--config", s(&config), "--target", s(&target)])
            .status
            .code(),
        Some(1)
    );
    let short = write(&dir, "short.txt", "0 0\n1 0\n2 1\n");
    assert_eq!(
        bin(&["run", "--config", s(&short), "--target", s(&target)])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(bin(&["gen", "--k", "2"]).status.code(), Some(1));
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn gen_is_reproducible_and_asymmetric() {
    let dir = TempDir::new().unwrap();
    let a = bin(&["gen", "--k", "7", "--seed", "9", "--count", "3"]);
    let b = bin(&["gen", "--k", "7", "--seed", "9", "--count", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let out = dir.path().join("gen");
    assert_eq!(
        bin(&[
            "gen",
            "--k",
            "7",
            "--seed",
            "9",
            "--count",
            "3",
            "--out",
            s(&out)
        ])
        .status
        .code(),
        Some(0)
    );
    for i in 0..3 {
        let text = std::fs::read_to_string(out.join(format!("config_{i:04}.txt"))).unwrap();
        let c = parse_config(&text).unwrap();
        assert_eq!(c.len(), 7);
        assert!(is_asymmetric(&c).unwrap());
        assert!(c
            .iter()
            .all(|p| (0..12).contains(&p.x) && (0..12).contains(&p.y)));
    }
}

#[test]
fn analyze_reports_the_eleven_frame() {
    let dir = TempDir::new().unwrap();
    let config = write(&dir, "c.txt", ELEVEN);
    let target = write(&dir, "t.txt", &line(11));
    let out = bin(&["analyze", "--config", s(&config), "--target", s(&target)]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("head (0,1) tail (7,2)"), "{text}");
    assert!(text.contains("phase: P1"), "{text}");
}

#[test]
fn small_fuzz_batch_passes() {
    let out = bin(&["fuzz", "--runs", "12", "--k-range", "3..6", "--seed", "5"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["formed"], 12);
    assert_eq!(bin(&["fuzz", "--runs", "0"]).status.code(), Some(0));
    assert_eq!(bin(&["fuzz", "--k-range", "2..5"]).status.code(), Some(1));
}

#[test]
fn config_text_round_trips() {
    let c: PointSet = [(-3, 4), (0, 0), (7, -2)]
        .into_iter()
        .map(GridPoint::from)
        .collect();
    assert_eq!(parse_config(&format_config(&c)).unwrap(), c);
}

fn mutated(
    phase: Phase,
    f: fn(MoveDecision) -> MoveDecision,
) -> impl Fn(&Snapshot, &TargetPattern) -> gridpattern::Result<Decision> + Sync {
    move |snap: &Snapshot, t: &TargetPattern| {
        let mut d = compute(snap, t)?;
        if d.phase == phase {
            d.action = f(d.action);
        }
        Ok(d)
    }
}

fn small_batch() -> FuzzOptions {
    FuzzOptions {
        runs: 30,
        k_min: 3,
        k_max: 8,
        side: 8,
        seed: 11,
        max_events: 20_000,
        ..FuzzOptions::default()
    }
}

#[test]
fn fuzzing_catches_a_reversed_step() {
    let reverse = mutated(Phase::P7, |a| match a {
        MoveDecision::Step(d) => MoveDecision::Step(d.opposite()),
        stay => stay,
    });
    let summary = fuzz_with(&small_batch(), &reverse).unwrap();
    assert!(!summary.passed());
}

#[test]
fn fuzzing_catches_a_robot_that_never_leaves_phase_four() {
    let lazy = mutated(Phase::P4, |_| MoveDecision::Stay);
    let summary = fuzz_with(&small_batch(), &lazy).unwrap();
    assert!(!summary.passed());
    assert!(summary.failures.iter().all(|r| r.outcome != "FORMED"));
}
