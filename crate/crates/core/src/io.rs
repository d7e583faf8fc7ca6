//! Text formats: schedules, trace tables and run summaries.
//!
//! Schedule file:
//!
//! ```text
//! n=3 horizon=2
//! 0: 0>1 1>2 2>0
//! 1: 0>1
//! ```
//!
//! Each line after the header lists the directed edges active at one
//! instant as `sender>receiver`, sorted by sender then receiver. Self-loops
//! are implied and never written.
//!
//! A run is stored as a directory holding `trace.tsv` (one row per
//! iteration and node) and `summary.json` (configuration echo, outcome and
//! per-epoch history).

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::engine::{EpochSummary, Outcome, RunConfig, RunResult, TraceRecord};
use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::topology::TopologySchedule;

pub const TRACE_FILE: &str = "trace.tsv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const SCHEDULE_FILE: &str = "schedule.txt";

pub const TRACE_HEADER: &str =
    "k\tnode\tx\ty\tratio\tz\tw\toracle_max\toracle_min\tepoch_boundary\tterminated";

/// Serializes instants `0..horizon` of `schedule`.
pub fn format_schedule(schedule: &TopologySchedule, horizon: usize) -> Result<String> {
    let mut out = format!("n={} horizon={}\n", schedule.node_count(), horizon);
    for k in 0..horizon {
        let g = schedule.at(k)?;
        let mut edges: Vec<(usize, usize)> = g
            .edges()
            .filter(|(i, j)| i != j)
            .map(|(receiver, sender)| (sender, receiver))
            .collect();
        edges.sort_unstable();
        write!(out, "{k}:").expect("writing to a String");
        for (sender, receiver) in edges {
            write!(out, " {sender}>{receiver}").expect("writing to a String");
        }
        out.push('\n');
    }
    Ok(out)
}

fn parse_err(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

fn header_field(line: usize, token: Option<&str>, key: &str) -> Result<usize> {
    let token = token.ok_or_else(|| parse_err(line, format!("missing `{key}=`")))?;
    token
        .strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| parse_err(line, format!("expected `{key}=<count>`, found `{token}`")))
}

/// Parses the schedule format into an explicit schedule.
pub fn parse_schedule(text: &str) -> Result<TopologySchedule> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty schedule file"))?;
    let mut tokens = header.split_whitespace();
    let n = header_field(1, tokens.next(), "n")?;
    let horizon = header_field(1, tokens.next(), "horizon")?;
    if tokens.next().is_some() {
        return Err(parse_err(1, "unexpected text after header"));
    }
    if n == 0 {
        return Err(parse_err(1, "node count must be positive"));
    }
    if horizon == 0 {
        return Err(parse_err(1, "horizon must be positive"));
    }

    let mut graphs = Vec::with_capacity(horizon);
    for (line_no, line) in lines {
        let k = graphs.len();
        let (index, rest) = line
            .split_once(':')
            .ok_or_else(|| parse_err(line_no, "expected `<k>: <edges>`"))?;
        let index: usize = index
            .trim()
            .parse()
            .map_err(|_| parse_err(line_no, format!("bad instant index `{index}`")))?;
        if index != k {
            return Err(parse_err(line_no, format!("expected instant {k}, found {index}")));
        }
        if k >= horizon {
            return Err(parse_err(line_no, format!("more than {horizon} instants")));
        }
        let mut edges = Vec::new();
        for token in rest.split_whitespace() {
            let (sender, receiver) = token
                .split_once('>')
                .and_then(|(s, r)| Some((s.parse::<usize>().ok()?, r.parse::<usize>().ok()?)))
                .ok_or_else(|| parse_err(line_no, format!("bad edge `{token}`")))?;
            if sender >= n || receiver >= n {
                return Err(parse_err(
                    line_no,
                    format!("edge `{token}` names a node outside 0..{n}"),
                ));
            }
            if sender == receiver {
                return Err(parse_err(
                    line_no,
                    format!("self-loop `{token}` must be left implicit"),
                ));
            }
            edges.push((receiver, sender));
        }
        graphs.push(Digraph::new(n, edges)?);
    }
    if graphs.len() != horizon {
        return Err(parse_err(
            text.lines().count() + 1,
            format!("expected {horizon} instants, found {}", graphs.len()),
        ));
    }
    TopologySchedule::explicit(graphs)
}

/// Writes a schedule with a finite horizon.
pub fn write_schedule(schedule: &TopologySchedule, path: impl AsRef<Path>) -> Result<()> {
    let horizon = schedule
        .horizon()
        .ok_or_else(|| Error::Config("schedule has no horizon; unroll or cap it first".into()))?;
    write_schedule_window(schedule, horizon, path)
}

/// Writes instants `0..horizon` of any schedule.
pub fn write_schedule_window(
    schedule: &TopologySchedule,
    horizon: usize,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    let text = format_schedule(schedule, horizon)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_schedule(path: impl AsRef<Path>) -> Result<TopologySchedule> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_schedule(&text)
}

/// The configuration fields needed to reproduce a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub n: usize,
    pub n_prime: usize,
    pub rho: f64,
    pub max_iters: usize,
    pub x0: Vec<f64>,
    /// Schedule selector, e.g. `random-pool:100`.
    pub schedule: String,
    pub seed: u64,
    pub failure_demo: bool,
}

impl ConfigEcho {
    pub fn new(config: &RunConfig, schedule: impl Into<String>) -> Self {
        ConfigEcho {
            n: config.n(),
            n_prime: config.n_prime,
            rho: config.rho,
            max_iters: config.max_iters,
            x0: config.x0.clone(),
            schedule: schedule.into(),
            seed: config.seed,
            failure_demo: config.failure_demo,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultEcho {
    pub outcome: Outcome,
    pub final_ratios: Vec<f64>,
    pub epochs: Vec<EpochSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct Summary {
    config: ConfigEcho,
    result: ResultEcho,
}

/// A run as stored on disk.
#[derive(Clone, Debug, PartialEq)]
pub struct RunArtifact {
    pub config: ConfigEcho,
    pub trace: Vec<TraceRecord>,
    pub result: ResultEcho,
}

impl RunArtifact {
    pub fn new(config: &RunConfig, schedule: impl Into<String>, result: &RunResult) -> Self {
        RunArtifact {
            config: ConfigEcho::new(config, schedule),
            trace: result.trace.clone(),
            result: ResultEcho {
                outcome: result.outcome.clone(),
                final_ratios: result.final_ratios(),
                epochs: result.epochs.clone(),
            },
        }
    }
}

/// 17 significant digits, enough to read back the same double.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Tab-separated trace, one row per `(k, node)`.
pub fn format_trace(trace: &[TraceRecord]) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for rec in trace {
        for node in 0..rec.node_count() {
            let ratio = rec.x[node] / rec.y[node];
            let fields = [
                rec.k.to_string(),
                node.to_string(),
                fmt_f64(rec.x[node]),
                fmt_f64(rec.y[node]),
                fmt_f64(ratio),
                fmt_f64(rec.z[node]),
                fmt_f64(rec.w[node]),
                fmt_f64(rec.oracle_max),
                fmt_f64(rec.oracle_min),
                u8::from(rec.epoch_boundary).to_string(),
                u8::from(rec.terminated[node]).to_string(),
            ];
            out.push_str(&fields.join("\t"));
            out.push('\n');
        }
    }
    out
}

pub fn parse_trace(text: &str) -> Result<Vec<TraceRecord>> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, header)) if header == TRACE_HEADER => {}
        _ => return Err(parse_err(1, "missing trace header")),
    }
    let mut trace: Vec<TraceRecord> = Vec::new();
    for (line_no, line) in lines {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 11 {
            return Err(parse_err(line_no, format!("expected 11 columns, found {}", fields.len())));
        }
        let int = |i: usize| -> Result<usize> {
            fields[i]
                .parse()
                .map_err(|_| parse_err(line_no, format!("bad integer `{}`", fields[i])))
        };
        let float = |i: usize| -> Result<f64> {
            fields[i]
                .parse()
                .map_err(|_| parse_err(line_no, format!("bad number `{}`", fields[i])))
        };
        let flag = |i: usize| -> Result<bool> {
            match fields[i] {
                "0" => Ok(false),
                "1" => Ok(true),
                other => Err(parse_err(line_no, format!("bad flag `{other}`"))),
            }
        };
        let (k, node) = (int(0)?, int(1)?);
        let start_new = match trace.last() {
            Some(rec) if rec.k == k => false,
            Some(rec) if rec.k > k => {
                return Err(parse_err(line_no, "rows are not sorted by iteration"))
            }
            _ => true,
        };
        if start_new {
            trace.push(TraceRecord {
                k,
                x: Vec::new(),
                y: Vec::new(),
                z: Vec::new(),
                w: Vec::new(),
                terminated: Vec::new(),
                oracle_max: float(7)?,
                oracle_min: float(8)?,
                epoch_boundary: flag(9)?,
            });
        }
        let rec = trace.last_mut().expect("just pushed");
        if node != rec.x.len() {
            return Err(parse_err(line_no, format!("expected node {}, found {node}", rec.x.len())));
        }
        rec.x.push(float(2)?);
        rec.y.push(float(3)?);
        rec.z.push(float(5)?);
        rec.w.push(float(6)?);
        rec.terminated.push(flag(10)?);
    }
    Ok(trace)
}

/// Writes `trace.tsv` and `summary.json` into `dir`, creating it if needed.
pub fn write_trace(artifact: &RunArtifact, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let trace_path = dir.join(TRACE_FILE);
    fs::write(&trace_path, format_trace(&artifact.trace)).map_err(|e| Error::io(&trace_path, e))?;
    let summary = Summary {
        config: artifact.config.clone(),
        result: artifact.result.clone(),
    };
    let mut json = serde_json::to_string_pretty(&summary)
        .map_err(|e| Error::Config(format!("cannot serialize summary: {e}")))?;
    json.push('\n');
    let summary_path = dir.join(SUMMARY_FILE);
    fs::write(&summary_path, json).map_err(|e| Error::io(&summary_path, e))
}

/// Reads back what [`write_trace`] wrote.
pub fn read_trace(dir: impl AsRef<Path>) -> Result<RunArtifact> {
    let dir = dir.as_ref();
    let trace_path = dir.join(TRACE_FILE);
    let text = fs::read_to_string(&trace_path).map_err(|e| Error::io(&trace_path, e))?;
    let trace = parse_trace(&text)?;
    let summary_path = dir.join(SUMMARY_FILE);
    let json = fs::read_to_string(&summary_path).map_err(|e| Error::io(&summary_path, e))?;
    let summary: Summary = serde_json::from_str(&json).map_err(|e| Error::Parse {
        line: e.line(),
        reason: e.to_string(),
    })?;
    Ok(RunArtifact {
        config: summary.config,
        trace,
        result: summary.result,
    })
}
