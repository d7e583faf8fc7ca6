//! Command-line driver behind the `ratio-consensus` binary.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | invalid flags, unreadable input or unwritable output |
//! | 2 | schedule or epoch length violates the protocol's assumptions |
//! | 3 | no termination within `--max-iters` (or the schedule ran out) |
//! | 4 | internal invariant failure during a run |

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{self, Outcome, RunConfig, RunResult};
use crate::error::{Error, Result};
use crate::io::{self, RunArtifact, SCHEDULE_FILE};
use crate::oracle;
use crate::topology::{self, CounterexampleVariant, ScheduleSpec, TopologySchedule};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_ASSUMPTION: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

/// Initial values of the counterexample experiment.
pub const COUNTEREXAMPLE_X0: [f64; 6] = [2.0, 3.0, 2.0, 2.0, 2.0, 10.0];

#[derive(Debug, Parser)]
#[command(name = "ratio-consensus", version, about = "Ratio consensus with distributed finite-time termination")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the protocol on one schedule and write its trace.
    Run(RunArgs),
    /// Compare an epoch length equal to the largest diameter against n - 1
    /// on the 6-node switching counterexample.
    Counterexample(CounterexampleArgs),
    /// Check union connectivity and per-instant connectivity of a schedule.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Node count (taken from the schedule or --x0 when omitted).
    #[arg(long)]
    n: Option<usize>,
    /// Epoch length; defaults to n.
    #[arg(long = "n-prime")]
    n_prime: Option<usize>,
    #[arg(long, default_value_t = 0.01)]
    rho: f64,
    /// random-pool:<size> | file:<path> | counterexample:<table1|section5>
    #[arg(long)]
    schedule: String,
    /// Comma-separated values, or uniform:<seed> for draws from (0, 1).
    #[arg(long)]
    x0: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "max-iters", default_value_t = 1000)]
    max_iters: usize,
    /// Directory for trace.tsv, summary.json and schedule.txt.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Allow n' < n - 1 and schedules that are not connected at every instant.
    #[arg(long = "failure-demo")]
    failure_demo: bool,
}

#[derive(Debug, Args)]
struct CounterexampleArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0.01)]
    rho: f64,
    #[arg(long = "max-iters", default_value_t = 1000)]
    max_iters: usize,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    schedule: String,
    /// Window bound for union connectivity.
    #[arg(long, default_value_t = 1)]
    l: usize,
    /// Instants to inspect; defaults to the schedule's own horizon.
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Failure carrying the exit code it maps to.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Invariant(_) => EXIT_INVARIANT,
            _ => EXIT_INVALID,
        };
        Failure::new(code, e.to_string())
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Entry point for the binary.
pub fn main_from_env() -> i32 {
    execute(std::env::args_os(), &mut std::io::stdout().lock())
}

/// Parses `args` (program name first) and runs the selected command,
/// writing human-readable output to `out`. Returns the exit code.
pub fn execute<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Run(args) => cmd_run(args, out),
        Command::Counterexample(args) => cmd_counterexample(args, out),
        Command::Verify(args) => cmd_verify(args, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

/// Parses `--x0`: either a comma-separated list or `uniform:<seed>`.
pub fn parse_x0(spec: &str, n: Option<usize>) -> Result<Vec<f64>> {
    if let Some(seed) = spec.strip_prefix("uniform:") {
        let seed: u64 = seed
            .parse()
            .map_err(|_| Error::Config(format!("bad uniform seed `{seed}`")))?;
        let n = n.ok_or_else(|| Error::Config("uniform:<seed> needs a node count".into()))?;
        return Ok(uniform_x0(n, seed));
    }
    let values = spec
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("bad initial value `{v}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    match n {
        Some(n) if n != values.len() => Err(Error::DimensionMismatch {
            expected: n,
            found: values.len(),
        }),
        _ => Ok(values),
    }
}

/// `n` draws from the open interval (0, 1).
pub fn uniform_x0(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.sample(Open01)).collect()
}

fn summary_line(result: &RunResult, average: f64) -> String {
    let status = match &result.outcome {
        Outcome::Terminated { epoch, .. } => format!("terminated epoch={epoch}"),
        Outcome::Split { terminated, .. } => format!("split terminated={terminated:?}"),
        Outcome::MaxIters { .. } => "max-iters".to_string(),
        Outcome::ScheduleExhausted { .. } => "schedule-exhausted".to_string(),
    };
    format!(
        "stop_k={} {status} spread={:.6e} avg_error={:.6e}",
        result.outcome.stop_iteration(),
        result.spread(),
        result.max_error(average),
    )
}

/// Writes the artifact directory plus the schedule instants actually used.
pub fn write_run(
    dir: &Path,
    config: &RunConfig,
    schedule_label: &str,
    result: &RunResult,
) -> Result<()> {
    let artifact = RunArtifact::new(config, schedule_label, result);
    io::write_trace(&artifact, dir)?;
    let used = result.outcome.stop_iteration().max(1);
    let used = config.schedule.horizon().map_or(used, |h| used.min(h));
    io::write_schedule_window(&config.schedule, used, dir.join(SCHEDULE_FILE))
}

fn cmd_run(args: RunArgs, out: &mut dyn Write) -> CmdResult {
    let spec: ScheduleSpec = args.schedule.parse()?;
    let listed_n = if args.x0.starts_with("uniform:") {
        None
    } else {
        Some(parse_x0(&args.x0, None)?.len())
    };
    let n = args.n.or(match spec {
        ScheduleSpec::RandomPool { .. } => listed_n,
        _ => None,
    });
    let schedule = spec.build(n, args.seed)?;
    let x0 = parse_x0(&args.x0, Some(schedule.node_count()))?;

    let mut config = RunConfig::new(schedule, x0);
    if let Some(n_prime) = args.n_prime {
        config.n_prime = n_prime;
    }
    config.rho = args.rho;
    config.max_iters = args.max_iters;
    config.seed = args.seed;
    config.failure_demo = args.failure_demo;

    if !args.failure_demo {
        if config.unsound_epoch_length() {
            return Err(Failure::new(
                EXIT_ASSUMPTION,
                format!(
                    "--n-prime {} is below n - 1 = {} (use --failure-demo to run anyway)",
                    config.n_prime,
                    config.n() - 1
                ),
            ));
        }
        let horizon = config
            .schedule
            .horizon()
            .map_or(config.max_iters, |h| h.min(config.max_iters))
            .max(1);
        let report = topology::verify_union_connectivity(&config.schedule, 1, horizon)?;
        if !report.union_connected() || !config.schedule.per_step_strongly_connected() {
            return Err(Failure::new(
                EXIT_ASSUMPTION,
                format!("schedule is not strongly connected at every instant\n{report}"),
            ));
        }
    }
    config.validate()?;

    let result = engine::run(&config)?;
    let average = oracle::true_average(&config.x0)?;
    if let Some(dir) = &args.out {
        write_run(dir, &config, &spec.to_string(), &result)?;
    }
    writeln!(out, "{}", summary_line(&result, average))
        .map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
    Ok(match result.outcome {
        Outcome::Terminated { .. } | Outcome::Split { .. } => EXIT_OK,
        Outcome::MaxIters { .. } | Outcome::ScheduleExhausted { .. } => EXIT_NOT_CONVERGED,
    })
}

/// The two counterexample runs side by side.
#[derive(Clone, Debug)]
pub struct CounterexampleComparison {
    pub average: f64,
    pub rho: f64,
    /// Failure-demo run with `n'` equal to the largest diameter.
    pub short_epoch: usize,
    pub short: RunResult,
    /// Sound run with `n' = n - 1`.
    pub sound_epoch: usize,
    pub sound: RunResult,
}

impl CounterexampleComparison {
    /// Epochs where some node's estimate missed the true extremes in the
    /// short-epoch run.
    pub fn short_missed_epochs(&self) -> Vec<usize> {
        self.short.missed_epochs().map(|e| e.u).collect()
    }

    pub fn sound_missed_epochs(&self) -> Vec<usize> {
        self.sound.missed_epochs().map(|e| e.u).collect()
    }

    pub fn report(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "schedule counterexample:section5, x0 = {COUNTEREXAMPLE_X0:?}, average {}",
            self.average
        );
        for (label, epoch_len, run) in [
            ("largest diameter", self.short_epoch, &self.short),
            ("n - 1", self.sound_epoch, &self.sound),
        ] {
            let _ = writeln!(s, "n' = {epoch_len} ({label}): {}", summary_line(run, self.average));
            for e in run.missed_epochs() {
                let _ = writeln!(
                    s,
                    "  epoch {} (k={}): target max {} missed by nodes {:?}, target min {} missed by nodes {:?}",
                    e.u, e.k, e.target_max, e.missed_max, e.target_min, e.missed_min
                );
            }
            if run.missed_epochs().next().is_none() {
                let _ = writeln!(s, "  every epoch captured the global extremes");
            }
        }
        s
    }
}

/// Runs the section-5 counterexample with `n' = 3` (failure demo) and
/// `n' = 5`.
pub fn counterexample_comparison(rho: f64, max_iters: usize) -> Result<CounterexampleComparison> {
    let schedule = TopologySchedule::counterexample(CounterexampleVariant::Section5);
    let n = schedule.node_count();
    let largest_diameter = [topology::counterexample_g1(), topology::counterexample_g2()]
        .iter()
        .map(|g| g.diameter())
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or(1);

    let mut config = RunConfig::new(schedule, COUNTEREXAMPLE_X0.to_vec());
    config.rho = rho;
    config.max_iters = max_iters;

    let mut short_cfg = config.clone();
    short_cfg.n_prime = largest_diameter;
    short_cfg.failure_demo = true;
    let mut sound_cfg = config;
    sound_cfg.n_prime = n - 1;

    Ok(CounterexampleComparison {
        average: oracle::true_average(&COUNTEREXAMPLE_X0)?,
        rho,
        short_epoch: short_cfg.n_prime,
        short: engine::run(&short_cfg)?,
        sound_epoch: sound_cfg.n_prime,
        sound: engine::run(&sound_cfg)?,
    })
}

fn cmd_counterexample(args: CounterexampleArgs, out: &mut dyn Write) -> CmdResult {
    let cmp = counterexample_comparison(args.rho, args.max_iters)?;
    let report = cmp.report();
    if let Some(dir) = &args.out {
        let schedule = TopologySchedule::counterexample(CounterexampleVariant::Section5);
        for (epoch_len, run, failure_demo) in [
            (cmp.short_epoch, &cmp.short, true),
            (cmp.sound_epoch, &cmp.sound, false),
        ] {
            let mut config = RunConfig::new(schedule.clone(), COUNTEREXAMPLE_X0.to_vec());
            config.n_prime = epoch_len;
            config.rho = args.rho;
            config.max_iters = args.max_iters;
            config.failure_demo = failure_demo;
            write_run(
                &dir.join(format!("nprime{epoch_len}")),
                &config,
                "counterexample:section5",
                run,
            )?;
        }
        let path = dir.join("report.txt");
        std::fs::write(&path, &report).map_err(|e| Error::io(&path, e))?;
    }
    write!(out, "{report}").map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
    Ok(if cmp.sound.outcome.converged() {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    })
}

fn cmd_verify(args: VerifyArgs, out: &mut dyn Write) -> CmdResult {
    let spec: ScheduleSpec = args.schedule.parse()?;
    let schedule = spec.build(args.n, args.seed)?;
    let horizon = args
        .horizon
        .or(schedule.horizon())
        .ok_or_else(|| Failure::new(EXIT_INVALID, "--horizon is required for unbounded schedules"))?;
    let report = topology::verify_union_connectivity(&schedule, args.l, horizon)?;
    writeln!(out, "schedule: {spec}\n{report}").map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
    Ok(if report.union_connected() {
        EXIT_OK
    } else {
        EXIT_ASSUMPTION
    })
}
