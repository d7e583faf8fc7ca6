//! Topology schedules: which digraph is active at each instant.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{self, Digraph, GraphSequence};

/// Extra-edge probability used when generating random schedule pools.
pub const POOL_EXTRA_EDGE_PROB: f64 = 0.2;

/// Stream index reserved for deriving per-graph seeds of a random pool.
/// Per-instant draws use stream `k`.
const POOL_GENERATION_STREAM: u64 = u64::MAX;

#[derive(Clone, Debug, PartialEq)]
pub enum ScheduleSource {
    /// `graphs[pattern[k % pattern.len()]]`
    Periodic {
        graphs: Vec<Digraph>,
        pattern: Vec<usize>,
    },
    /// Uniform draw from `pool` at every instant, from a counter-based
    /// stream keyed by `seed` and `k`.
    RandomPool { pool: Vec<Digraph>, seed: u64 },
    /// One digraph per instant; the horizon is the list length.
    Explicit(Vec<Digraph>),
}

/// Maps each instant `k` to a digraph on a fixed node set.
#[derive(Clone, Debug, PartialEq)]
pub struct TopologySchedule {
    n: usize,
    source: ScheduleSource,
    horizon: Option<usize>,
    window_bound: Option<usize>,
    per_step_strongly_connected: bool,
}

impl TopologySchedule {
    fn build(source: ScheduleSource, horizon: Option<usize>) -> Result<Self> {
        let graphs: &[Digraph] = match &source {
            ScheduleSource::Periodic { graphs, .. } => graphs,
            ScheduleSource::RandomPool { pool, .. } => pool,
            ScheduleSource::Explicit(graphs) => graphs,
        };
        let first = graphs
            .first()
            .ok_or_else(|| Error::Config("schedule needs at least one digraph".into()))?;
        let n = first.node_count();
        if n == 0 {
            return Err(Error::Config("schedule digraphs need at least one node".into()));
        }
        for g in graphs {
            if g.node_count() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: g.node_count(),
                });
            }
            g.require_self_loops()?;
        }
        let per_step_strongly_connected = match &source {
            ScheduleSource::Periodic { graphs, pattern } => {
                pattern.iter().all(|&p| graphs[p].is_strongly_connected())
            }
            _ => graphs.iter().all(Digraph::is_strongly_connected),
        };
        Ok(TopologySchedule {
            n,
            source,
            horizon,
            window_bound: per_step_strongly_connected.then_some(1),
            per_step_strongly_connected,
        })
    }

    /// The same digraph at every instant.
    pub fn fixed(g: Digraph) -> Result<Self> {
        Self::periodic(vec![g], vec![0])
    }

    pub fn periodic(graphs: Vec<Digraph>, pattern: Vec<usize>) -> Result<Self> {
        if pattern.is_empty() {
            return Err(Error::Config("periodic pattern is empty".into()));
        }
        if let Some(&bad) = pattern.iter().find(|&&p| p >= graphs.len()) {
            return Err(Error::Config(format!(
                "pattern index {bad} out of range for {} graphs",
                graphs.len()
            )));
        }
        Self::build(ScheduleSource::Periodic { graphs, pattern }, None)
    }

    /// `pool_size` random strongly connected digraphs on `n` nodes, one of
    /// them drawn uniformly at every instant.
    pub fn random_pool(pool_size: usize, n: usize, seed: u64) -> Result<Self> {
        if pool_size == 0 {
            return Err(Error::Config("pool size must be at least 1".into()));
        }
        let mut seeds = ChaCha8Rng::seed_from_u64(seed);
        seeds.set_stream(POOL_GENERATION_STREAM);
        let pool = (0..pool_size)
            .map(|_| random_strongly_connected_digraph(n, POOL_EXTRA_EDGE_PROB, seeds.gen()))
            .collect::<Result<Vec<_>>>()?;
        Self::build(ScheduleSource::RandomPool { pool, seed }, None)
    }

    /// One digraph per instant; horizon is `graphs.len()`.
    pub fn explicit(graphs: Vec<Digraph>) -> Result<Self> {
        let horizon = graphs.len();
        Self::build(ScheduleSource::Explicit(graphs), Some(horizon))
    }

    pub fn counterexample(variant: CounterexampleVariant) -> Self {
        let pattern = match variant {
            CounterexampleVariant::Table1 => vec![0, 0, 1, 1, 1],
            CounterexampleVariant::Section5 => vec![1, 1, 0],
        };
        Self::periodic(vec![counterexample_g1(), counterexample_g2()], pattern)
            .expect("counterexample graphs are well formed")
    }

    /// Caps the schedule at `horizon` instants (`0..horizon`).
    pub fn with_horizon(mut self, horizon: usize) -> Self {
        self.horizon = Some(match self.horizon {
            Some(h) => h.min(horizon),
            None => horizon,
        });
        self
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn horizon(&self) -> Option<usize> {
        self.horizon
    }

    pub fn source(&self) -> &ScheduleSource {
        &self.source
    }

    /// Connectivity window bound `l`, when known from construction.
    pub fn window_bound(&self) -> Option<usize> {
        self.window_bound
    }

    /// Whether every digraph the schedule can produce is strongly connected.
    pub fn per_step_strongly_connected(&self) -> bool {
        self.per_step_strongly_connected
    }

    /// The digraph active at instant `k`.
    pub fn at(&self, k: usize) -> Result<&Digraph> {
        if let Some(horizon) = self.horizon {
            if k >= horizon {
                return Err(Error::HorizonExceeded { k, horizon });
            }
        }
        let g = match &self.source {
            ScheduleSource::Periodic { graphs, pattern } => &graphs[pattern[k % pattern.len()]],
            ScheduleSource::RandomPool { pool, seed } => &pool[pool_draw(*seed, k, pool.len())],
            ScheduleSource::Explicit(graphs) => graphs.get(k).ok_or(Error::HorizonExceeded {
                k,
                horizon: graphs.len(),
            })?,
        };
        debug_assert!(g.missing_self_loop().is_none());
        Ok(g)
    }

    /// Materializes instants `0..steps` as an explicit schedule.
    pub fn unroll(&self, steps: usize) -> Result<TopologySchedule> {
        let graphs = (0..steps)
            .map(|k| self.at(k).cloned())
            .collect::<Result<Vec<_>>>()?;
        if graphs.is_empty() {
            return Err(Error::Config("cannot unroll zero instants".into()));
        }
        Self::explicit(graphs)
    }
}

impl GraphSequence for TopologySchedule {
    fn node_count(&self) -> usize {
        self.n
    }

    fn graph_at(&self, k: usize) -> Result<&Digraph> {
        self.at(k)
    }
}

fn pool_draw(seed: u64, k: usize, len: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k as u64);
    rng.gen_range(0..len)
}

/// A random Hamiltonian cycle over a shuffled node order, plus every other
/// ordered pair independently with probability `extra_edge_prob`, plus
/// self-loops. Strongly connected by construction.
pub fn random_strongly_connected_digraph(
    n: usize,
    extra_edge_prob: f64,
    seed: u64,
) -> Result<Digraph> {
    if n < 2 {
        return Err(Error::Config(format!("need at least 2 nodes, got {n}")));
    }
    if !(0.0..=1.0).contains(&extra_edge_prob) {
        return Err(Error::Config(format!(
            "edge probability {extra_edge_prob} outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);

    let mut edges: Vec<(usize, usize)> = (0..n).map(|t| (order[(t + 1) % n], order[t])).collect();
    for i in 0..n {
        for j in 0..n {
            // one draw per ordered pair keeps the stream layout fixed
            let draw: f64 = rng.gen();
            if i != j && draw < extra_edge_prob {
                edges.push((i, j));
            }
        }
    }
    Digraph::new(n, edges)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CounterexampleVariant {
    /// `G1, G1, G2, G2, G2`, repeated.
    Table1,
    /// `G2, G2, G1`, repeated.
    Section5,
}

impl FromStr for CounterexampleVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table1" => Ok(Self::Table1),
            "section5" => Ok(Self::Section5),
            other => Err(Error::Config(format!("unknown counterexample variant `{other}`"))),
        }
    }
}

impl fmt::Display for CounterexampleVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Table1 => "table1",
            Self::Section5 => "section5",
        })
    }
}

/// First graph of the 6-node switching counterexample (0-based labels):
/// a path 0-1-2 with 2 as a hub to 3, 4 and 5. Diameter 3.
pub fn counterexample_g1() -> Digraph {
    Digraph::undirected(6, [(0, 1), (1, 2), (2, 3), (2, 4), (2, 5)]).expect("valid edges")
}

/// Second graph of the 6-node switching counterexample (0-based labels).
/// Diameter 3.
pub fn counterexample_g2() -> Digraph {
    Digraph::undirected(6, [(0, 1), (1, 2), (0, 3), (1, 3), (2, 3), (3, 4), (4, 5)])
        .expect("valid edges")
}

/// Result of checking bounded-window union connectivity over a horizon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnionReport {
    pub window_bound: usize,
    pub horizon: usize,
    /// Closed windows as `(start, length)`; each union is strongly connected.
    pub windows: Vec<(usize, usize)>,
    /// A window that reached `window_bound` instants without its union
    /// becoming strongly connected.
    pub violation: Option<(usize, usize)>,
    /// Trailing window cut off by the horizon while still shorter than the
    /// bound. Not a violation on the inspected prefix.
    pub open_tail: Option<(usize, usize)>,
    pub per_step_strongly_connected: bool,
    /// Largest single-instant diameter; `None` if some instant is not
    /// strongly connected.
    pub max_diameter: Option<usize>,
    pub node_count: usize,
}

impl UnionReport {
    pub fn union_connected(&self) -> bool {
        self.violation.is_none()
    }

    /// Smallest epoch length valid for every schedule on this node set.
    pub fn safe_epoch_length(&self) -> usize {
        self.node_count.saturating_sub(1)
    }
}

impl fmt::Display for UnionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "nodes: {}", self.node_count)?;
        writeln!(f, "horizon: {}", self.horizon)?;
        writeln!(f, "window bound l: {}", self.window_bound)?;
        writeln!(
            f,
            "union connectivity: {}",
            if self.union_connected() { "pass" } else { "FAIL" }
        )?;
        writeln!(f, "closed windows: {}", self.windows.len())?;
        if let Some(len) = self.windows.iter().map(|w| w.1).max() {
            writeln!(f, "longest window: {len}")?;
        }
        if let Some((start, len)) = self.violation {
            writeln!(f, "violation: window at {start} not connected after {len} instants")?;
        }
        if let Some((start, len)) = self.open_tail {
            writeln!(f, "open tail: window at {start} cut by horizon after {len} instants")?;
        }
        writeln!(f, "per-step strongly connected: {}", self.per_step_strongly_connected)?;
        match self.max_diameter {
            Some(d) => writeln!(f, "max diameter D_max: {d}")?,
            None => writeln!(f, "max diameter D_max: undefined")?,
        }
        write!(f, "safe epoch length n': {}", self.safe_epoch_length())
    }
}

/// Greedy windowing: each window grows from its start until the union of
/// its digraphs is strongly connected, and fails once it spans `l`
/// instants without connecting.
pub fn verify_union_connectivity(
    schedule: &TopologySchedule,
    l: usize,
    horizon: usize,
) -> Result<UnionReport> {
    if l == 0 {
        return Err(Error::Config("window bound l must be at least 1".into()));
    }
    if horizon < l {
        return Err(Error::Config(format!("horizon {horizon} shorter than window bound {l}")));
    }
    let mut report = UnionReport {
        window_bound: l,
        horizon,
        windows: Vec::new(),
        violation: None,
        open_tail: None,
        per_step_strongly_connected: true,
        max_diameter: Some(0),
        node_count: schedule.node_count(),
    };

    for k in 0..horizon {
        let g = schedule.at(k)?;
        match g.diameter() {
            Ok(d) => report.max_diameter = report.max_diameter.map(|m| m.max(d)),
            Err(_) => {
                report.per_step_strongly_connected = false;
                report.max_diameter = None;
            }
        }
    }

    let mut start = 0;
    while start < horizon {
        let mut acc = schedule.at(start)?.clone();
        let mut len = 1;
        loop {
            if acc.is_strongly_connected() {
                report.windows.push((start, len));
                break;
            }
            if len == l {
                report.violation = Some((start, len));
                return Ok(report);
            }
            if start + len == horizon {
                report.open_tail = Some((start, len));
                return Ok(report);
            }
            acc = graph::union([&acc, schedule.at(start + len)?])?;
            len += 1;
        }
        start += len;
    }
    Ok(report)
}

/// Textual schedule selector: `random-pool:<size>`, `file:<path>` or
/// `counterexample:<table1|section5>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScheduleSpec {
    RandomPool { pool_size: usize },
    File(PathBuf),
    Counterexample(CounterexampleVariant),
}

impl ScheduleSpec {
    /// Builds the schedule. `n` is required for random pools and checked
    /// against the other sources when given.
    pub fn build(&self, n: Option<usize>, seed: u64) -> Result<TopologySchedule> {
        let schedule = match self {
            ScheduleSpec::RandomPool { pool_size } => {
                let n = n.ok_or_else(|| Error::Config("random-pool schedule needs a node count".into()))?;
                TopologySchedule::random_pool(*pool_size, n, seed)?
            }
            ScheduleSpec::File(path) => crate::io::read_schedule(path)?,
            ScheduleSpec::Counterexample(variant) => TopologySchedule::counterexample(*variant),
        };
        match n {
            Some(n) if n != schedule.node_count() => Err(Error::DimensionMismatch {
                expected: n,
                found: schedule.node_count(),
            }),
            _ => Ok(schedule),
        }
    }
}

impl FromStr for ScheduleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("schedule `{s}` is not of the form kind:arg")))?;
        match kind {
            "random-pool" => {
                let pool_size = arg
                    .parse()
                    .map_err(|_| Error::Config(format!("bad pool size `{arg}`")))?;
                Ok(ScheduleSpec::RandomPool { pool_size })
            }
            "file" => Ok(ScheduleSpec::File(PathBuf::from(arg))),
            "counterexample" => Ok(ScheduleSpec::Counterexample(arg.parse()?)),
            other => Err(Error::Config(format!("unknown schedule kind `{other}`"))),
        }
    }
}

impl fmt::Display for ScheduleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScheduleSpec::RandomPool { pool_size } => write!(f, "random-pool:{pool_size}"),
            ScheduleSpec::File(path) => write!(f, "file:{}", path.display()),
            ScheduleSpec::Counterexample(v) => write!(f, "counterexample:{v}"),
        }
    }
}
