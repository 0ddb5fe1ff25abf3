use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use gridpattern::scheduler::trace::{read_jsonl, write_jsonl};
use gridpattern::scheduler::AdversaryKind;
use gridpattern::target::canonicalize_target;
use gridpattern::verify;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gridpattern_cli::analyze::analyze;
use gridpattern_cli::config_file::{format_config, read_config};
use gridpattern_cli::fuzz::{fuzz, FuzzOptions};
use gridpattern_cli::render::{render, target_overlay};
use gridpattern_cli::report::{execute, RunSettings};
use gridpattern_cli::sample::random_asymmetric;

#[derive(Parser)]
#[command(
    name = "gridpattern",
    version,
    about = "Pattern formation by oblivious robots on the grid"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum AdversaryArg {
    Random,
    Roundrobin,
    Stale,
}

impl From<AdversaryArg> for AdversaryKind {
    fn from(a: AdversaryArg) -> Self {
        match a {
            AdversaryArg::Random => AdversaryKind::Random,
            AdversaryArg::Roundrobin => AdversaryKind::RoundRobin,
            AdversaryArg::Stale => AdversaryKind::MaxStale,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the robots until the pattern forms.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long, value_enum, default_value = "random")]
        adversary: AdversaryArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fairness window in events [default: 4 per robot]
        #[arg(long)]
        fairness: Option<usize>,
        #[arg(long, default_value_t = 100_000)]
        max_events: u64,
        /// Write the event trace here, one JSON record per line.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Draw the initial and final configurations on standard error.
        #[arg(long)]
        render: bool,
    },
    /// Print corner strings, frames, head and tail, and with a pattern the
    /// conditions and phase.
    Analyze {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        target: Option<PathBuf>,
    },
    /// Sample asymmetric configurations.
    Gen {
        #[arg(long)]
        k: usize,
        #[arg(long = "box", default_value_t = 12)]
        side: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Write one file per configuration into this directory instead of
        /// standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run many random instances and check every verdict.
    Fuzz {
        #[arg(long, default_value_t = 500)]
        runs: usize,
        /// Robot counts, as `a..b` (inclusive).
        #[arg(long, default_value = "3..12")]
        k_range: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "box", default_value_t = 12)]
        side: i64,
        #[arg(long, default_value_t = 100_000)]
        max_events: u64,
    },
    /// Check a recorded trace.
    Verify {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        fairness: Option<u64>,
    },
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s.split_once("..").context("expected a..b")?;
    let a: usize = a.trim().parse().context("bad lower bound")?;
    let b: usize = b
        .trim_start_matches('=')
        .trim()
        .parse()
        .context("bad upper bound")?;
    if a > b {
        bail!("empty range {s}");
    }
    Ok((a, b))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(command: Command) -> Result<u8> {
    match command {
        Command::Run {
            config,
            target,
            adversary,
            seed,
            fairness,
            max_events,
            trace,
            render: draw,
        } => {
            let initial = read_config(&config)?;
            let t = canonicalize_target(&read_config(&target)?)?;
            let settings = RunSettings {
                adversary: adversary.into(),
                seed,
                window: fairness,
                max_events,
            };
            let (res, report) = execute(&initial, &t, &settings)?;
            if let Some(path) = trace {
                let f =
                    File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                let mut w = BufWriter::new(f);
                write_jsonl(&res.trace, &mut w)?;
                w.flush()?;
            }
            if draw {
                eprintln!(
                    "initial:\n{}",
                    render(&res.initial, target_overlay(&res.initial, &t).as_ref())
                );
                eprintln!(
                    "final:\n{}",
                    render(
                        &res.final_config,
                        target_overlay(&res.final_config, &t).as_ref()
                    )
                );
            }
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(report.exit_code() as u8)
        }
        Command::Analyze { config, target } => {
            let c = read_config(&config)?;
            let t = target
                .map(|p| read_config(&p).and_then(|s| Ok(canonicalize_target(&s)?)))
                .transpose()?;
            print!("{}", analyze(&c, t.as_ref())?);
            Ok(0)
        }
        Command::Gen {
            k,
            side,
            seed,
            count,
            out,
        } => {
            if k < 3 {
                bail!("--k must be at least 3");
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            for i in 0..count {
                let c = random_asymmetric(&mut rng, k, side)?;
                let text = format!(
                    "# k={k} box={side} seed={seed} index={i}\n{}",
                    format_config(&c)
                );
                match &out {
                    Some(dir) => {
                        std::fs::create_dir_all(dir)?;
                        std::fs::write(dir.join(format!("config_{i:04}.txt")), text)?;
                    }
                    None => {
                        if i > 0 {
                            writeln!(lock)?;
                        }
                        write!(lock, "{text}")?;
                    }
                }
            }
            Ok(0)
        }
        Command::Fuzz {
            runs,
            k_range,
            seed,
            side,
            max_events,
        } => {
            let (k_min, k_max) = parse_range(&k_range)?;
            let opts = FuzzOptions {
                runs,
                k_min,
                k_max,
                side,
                seed,
                max_events,
                ..FuzzOptions::default()
            };
            let summary = fuzz(&opts)?;
            println!("{}", serde_json::to_string_pretty(&summary)?);
            Ok(if summary.passed() { 0 } else { 3 })
        }
        Command::Verify {
            trace,
            target,
            fairness,
        } => {
            let f = File::open(&trace).with_context(|| format!("opening {}", trace.display()))?;
            let events = read_jsonl(BufReader::new(f))?;
            let t = canonicalize_target(&read_config(&target)?)?;
            let robots = verify::initial_positions(&events).len();
            let final_config = verify::final_configuration(&events)?;
            let mut verdicts = std::collections::BTreeMap::new();
            verdicts.insert("collision_free", verify::check_collision_free(&events)?);
            verdicts.insert(
                "phase_transitions",
                verify::check_phase_transitions(&events),
            );
            verdicts.insert("formed", verify::check_formed(&final_config, &t));
            verdicts.insert(
                "fairness",
                verify::check_fairness(&events, robots, fairness.unwrap_or(4 * robots as u64)),
            );
            let passed = verdicts.values().all(|v| v.passed);
            println!("{}", serde_json::to_string_pretty(&verdicts)?);
            Ok(if passed { 0 } else { 3 })
        }
    }
}
