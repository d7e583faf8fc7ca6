//! The protocol core: ratio consensus with max/min propagation and
//! epoch-based distributed termination.
//!
//! Every node keeps a numerator `x` and denominator `y`, pushed along
//! out-edges with column-stochastic weights so that `x / y` converges to the
//! average of the initial `x`. Alongside, each node floods the running
//! maximum `z` and minimum `w` of the ratios. Every `n'` iterations (an
//! epoch) a node reads `z` and `w` as the global extremes of the ratios at
//! the previous epoch, stops if their gap is below `rho`, and otherwise
//! resets `z` and `w` to its current ratio.
//!
//! With `n' >= n - 1` and every instant strongly connected, `z` and `w`
//! hold the exact global extremes at each epoch, so all nodes decide the
//! same thing at the same iteration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::oracle;
use crate::topology::TopologySchedule;
use crate::weights::WeightMatrix;

/// Per-node protocol variables.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgentState {
    pub x: f64,
    pub y: f64,
    /// Running maximum of ratios since the last reset.
    pub z: f64,
    /// Running minimum of ratios since the last reset.
    pub w: f64,
    /// Global maximum estimate read at the last epoch.
    pub alpha_max: f64,
    /// Global minimum estimate read at the last epoch.
    pub alpha_min: f64,
    pub beta: f64,
    pub terminated: bool,
}

impl AgentState {
    /// `y(0) = 1`, so `z` and `w` start at `x0`.
    pub fn new(x0: f64) -> Self {
        AgentState {
            x: x0,
            y: 1.0,
            z: x0,
            w: x0,
            alpha_max: x0,
            alpha_min: x0,
            beta: 0.0,
            terminated: false,
        }
    }

    pub fn ratio(&self) -> f64 {
        self.x / self.y
    }

    fn outgoing(&self, share: f64) -> Message {
        Message {
            x: share * self.x,
            y: share * self.y,
            z: self.z,
            w: self.w,
        }
    }
}

/// What a sender pushes to one receiver in a round: its weighted mass and
/// its current extremes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Message {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub w: f64,
}

/// Transport used for one synchronous round. Messages delivered during a
/// round become visible to the receiver when its inbox is taken.
pub trait Delivery {
    fn deliver(&mut self, sender: usize, receiver: usize, msg: Message);

    /// Everything delivered to `receiver` this round, as `(sender, msg)`.
    fn take_inbox(&mut self, receiver: usize) -> Vec<(usize, Message)>;
}

/// In-process lock-step delivery.
#[derive(Debug, Default)]
pub struct Mailboxes {
    inboxes: Vec<Vec<(usize, Message)>>,
}

impl Mailboxes {
    pub fn new(n: usize) -> Self {
        Mailboxes {
            inboxes: vec![Vec::new(); n],
        }
    }
}

impl Delivery for Mailboxes {
    fn deliver(&mut self, sender: usize, receiver: usize, msg: Message) {
        if receiver >= self.inboxes.len() {
            self.inboxes.resize(receiver + 1, Vec::new());
        }
        self.inboxes[receiver].push((sender, msg));
    }

    fn take_inbox(&mut self, receiver: usize) -> Vec<(usize, Message)> {
        self.inboxes
            .get_mut(receiver)
            .map(std::mem::take)
            .unwrap_or_default()
    }
}

fn check_active(states: &[AgentState]) -> Result<()> {
    match states.iter().position(|s| s.terminated) {
        Some(i) => Err(Error::Invariant(format!("node {i} already terminated"))),
        None => Ok(()),
    }
}

/// One synchronous exchange. `links(j)` lists `(receiver, share)` for
/// sender `j`; each receiver sums incoming mass and takes the max/min of
/// incoming extremes, in sender order.
fn exchange<D, F>(states: &[AgentState], links: F, delivery: &mut D) -> Result<Vec<AgentState>>
where
    D: Delivery,
    F: Fn(usize) -> Result<Vec<(usize, f64)>>,
{
    for (j, state) in states.iter().enumerate() {
        for (i, share) in links(j)? {
            delivery.deliver(j, i, state.outgoing(share));
        }
    }
    let mut next = states.to_vec();
    for (i, state) in next.iter_mut().enumerate() {
        let mut inbox = delivery.take_inbox(i);
        if inbox.is_empty() {
            return Err(Error::Invariant(format!("node {i} received nothing, self-loop missing")));
        }
        inbox.sort_by_key(|&(sender, _)| sender);
        let (mut x, mut y) = (0.0, 0.0);
        let (mut z, mut w) = (f64::NEG_INFINITY, f64::INFINITY);
        for (_, msg) in &inbox {
            x += msg.x;
            y += msg.y;
            z = z.max(msg.z);
            w = w.min(msg.w);
        }
        state.x = x;
        state.y = y;
        state.z = z;
        state.w = w;
    }
    Ok(next)
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Ratio-consensus update of `x` and `y` only:
/// `x_i' = sum_j p_ij x_j`, `y_i' = sum_j p_ij y_j`.
pub fn ratio_step(states: &[AgentState], weights: &WeightMatrix) -> Result<Vec<AgentState>> {
    check_dim(weights.dim(), states.len())?;
    check_active(states)?;
    let n = states.len();
    let links = |j: usize| {
        Ok((0..n)
            .filter_map(|i| {
                let p = weights.get(i, j);
                (p > 0.0).then_some((i, p))
            })
            .collect())
    };
    let mut next = exchange(states, links, &mut Mailboxes::new(n))?;
    for (new, old) in next.iter_mut().zip(states) {
        new.z = old.z;
        new.w = old.w;
    }
    Ok(next)
}

/// Max/min flooding of `z` and `w` only:
/// `z_i' = max_{j in N-(i)} z_j`, `w_i' = min_{j in N-(i)} w_j`.
pub fn maxmin_step(states: &[AgentState], g: &Digraph) -> Result<Vec<AgentState>> {
    check_dim(g.node_count(), states.len())?;
    let links = |j: usize| Ok(g.out_neighbors(j)?.iter().map(|&i| (i, 0.0)).collect());
    let mut next = exchange(states, links, &mut Mailboxes::new(states.len()))?;
    for (new, old) in next.iter_mut().zip(states) {
        new.x = old.x;
        new.y = old.y;
    }
    Ok(next)
}

/// Both updates in a single round over `g`, with `weights` supported on
/// `g`'s edges.
pub fn protocol_round<D: Delivery>(
    states: &[AgentState],
    g: &Digraph,
    weights: &WeightMatrix,
    delivery: &mut D,
) -> Result<Vec<AgentState>> {
    check_dim(g.node_count(), states.len())?;
    check_dim(weights.dim(), states.len())?;
    check_active(states)?;
    let links = |j: usize| Ok(g.out_neighbors(j)?.iter().map(|&i| (i, weights.get(i, j))).collect());
    exchange(states, links, delivery)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpochDecision {
    Continue,
    Terminate,
    /// Nodes disagreed; listed nodes stopped, the rest did not.
    Split { terminated: Vec<usize> },
}

/// Epoch block at `k = u n'`. Each node reads `z`/`w` into
/// `alpha_max`/`alpha_min`, stops when `beta < rho`, and otherwise resets
/// `z` and `w` to its current ratio.
pub fn epoch_update(states: &[AgentState], rho: f64) -> (EpochDecision, Vec<AgentState>) {
    let mut next = states.to_vec();
    let mut stopped = Vec::new();
    for (i, s) in next.iter_mut().enumerate() {
        s.alpha_max = s.z;
        s.alpha_min = s.w;
        s.beta = s.alpha_max - s.alpha_min;
        if s.beta < rho {
            s.terminated = true;
            stopped.push(i);
        } else {
            let r = s.ratio();
            s.z = r;
            s.w = r;
        }
    }
    let decision = if stopped.is_empty() {
        EpochDecision::Continue
    } else if stopped.len() == next.len() {
        EpochDecision::Terminate
    } else {
        EpochDecision::Split { terminated: stopped }
    };
    (decision, next)
}

/// Everything needed to reproduce a run.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub schedule: TopologySchedule,
    pub x0: Vec<f64>,
    /// Epoch length; must bound `n - 1` from above for sound detection.
    pub n_prime: usize,
    pub rho: f64,
    pub max_iters: usize,
    /// Recorded for reproducibility; the engine itself draws nothing.
    pub seed: u64,
    /// Permits unsound `n'` and schedules that are not connected at every
    /// instant, recording discrepancies instead of failing.
    pub failure_demo: bool,
}

impl RunConfig {
    /// Defaults: `n' = n`, `rho = 0.01`, `max_iters = 10_000`.
    pub fn new(schedule: TopologySchedule, x0: Vec<f64>) -> Self {
        RunConfig {
            n_prime: schedule.node_count(),
            schedule,
            x0,
            rho: 0.01,
            max_iters: 10_000,
            seed: 0,
            failure_demo: false,
        }
    }

    pub fn n(&self) -> usize {
        self.x0.len()
    }

    /// `n' < n - 1`: max/min flooding may not finish within an epoch.
    pub fn unsound_epoch_length(&self) -> bool {
        self.n_prime + 1 < self.n()
    }

    pub fn validate(&self) -> Result<()> {
        check_dim(self.schedule.node_count(), self.x0.len())?;
        if self.x0.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("initial values must be finite".into()));
        }
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(Error::Config(format!("rho must be positive, got {}", self.rho)));
        }
        if self.n_prime == 0 {
            return Err(Error::Config("epoch length n' must be at least 1".into()));
        }
        if !self.failure_demo {
            if self.unsound_epoch_length() {
                return Err(Error::Config(format!(
                    "epoch length {} is below n - 1 = {}; enable failure-demo mode to run it anyway",
                    self.n_prime,
                    self.n() - 1
                )));
            }
            if !self.schedule.per_step_strongly_connected() {
                return Err(Error::Config(
                    "schedule is not strongly connected at every instant".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Snapshot of every node after iteration `k`, plus the true extremes of
/// the ratios at `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRecord {
    pub k: usize,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// At an epoch boundary these are the values read as estimates,
    /// before any reset.
    pub z: Vec<f64>,
    pub w: Vec<f64>,
    pub terminated: Vec<bool>,
    pub oracle_max: f64,
    pub oracle_min: f64,
    pub epoch_boundary: bool,
}

impl TraceRecord {
    fn capture(k: usize, states: &[AgentState], epoch_boundary: bool) -> Result<Self> {
        let x: Vec<f64> = states.iter().map(|s| s.x).collect();
        let y: Vec<f64> = states.iter().map(|s| s.y).collect();
        let (oracle_max, oracle_min) = oracle::global_extremes(&x, &y)?;
        Ok(TraceRecord {
            k,
            x,
            y,
            z: states.iter().map(|s| s.z).collect(),
            w: states.iter().map(|s| s.w).collect(),
            terminated: states.iter().map(|s| s.terminated).collect(),
            oracle_max,
            oracle_min,
            epoch_boundary,
        })
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.x.iter().zip(&self.y).map(|(x, y)| x / y).collect()
    }

    pub fn node_count(&self) -> usize {
        self.x.len()
    }
}

/// What happened at one epoch boundary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochSummary {
    pub u: usize,
    pub k: usize,
    /// `M` and `m` at the previous epoch (or `k = 0`): what `z` and `w`
    /// should have captured.
    pub target_max: f64,
    pub target_min: f64,
    /// `M(k)` and `m(k)` at this boundary.
    pub oracle_max: f64,
    pub oracle_min: f64,
    pub alpha_max: Vec<f64>,
    pub alpha_min: Vec<f64>,
    pub beta: Vec<f64>,
    /// Nodes whose max estimate fell short of `target_max`.
    pub missed_max: Vec<usize>,
    /// Nodes whose min estimate exceeded `target_min`.
    pub missed_min: Vec<usize>,
    pub decision: EpochDecision,
}

impl EpochSummary {
    pub fn captured_extremes(&self) -> bool {
        self.missed_max.is_empty() && self.missed_min.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum Outcome {
    /// All nodes stopped together at iteration `k`.
    Terminated { k: usize, epoch: usize },
    /// Some nodes stopped while others did not (failure-demo only).
    Split {
        k: usize,
        epoch: usize,
        terminated: Vec<usize>,
    },
    /// `max_iters` reached without a stop.
    MaxIters { k: usize },
    /// The schedule ended before a stop.
    ScheduleExhausted { k: usize },
}

impl Outcome {
    pub fn converged(&self) -> bool {
        matches!(self, Outcome::Terminated { .. })
    }

    /// Iteration at which the run ended.
    pub fn stop_iteration(&self) -> usize {
        match *self {
            Outcome::Terminated { k, .. }
            | Outcome::Split { k, .. }
            | Outcome::MaxIters { k }
            | Outcome::ScheduleExhausted { k } => k,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub outcome: Outcome,
    pub final_states: Vec<AgentState>,
    pub epochs: Vec<EpochSummary>,
    pub trace: Vec<TraceRecord>,
}

impl RunResult {
    pub fn final_ratios(&self) -> Vec<f64> {
        self.final_states.iter().map(AgentState::ratio).collect()
    }

    /// Largest minus smallest final ratio.
    pub fn spread(&self) -> f64 {
        let r = self.final_ratios();
        let max = r.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = r.iter().copied().fold(f64::INFINITY, f64::min);
        max - min
    }

    /// Largest distance from a final ratio to `target`.
    pub fn max_error(&self, target: f64) -> f64 {
        self.final_ratios()
            .iter()
            .map(|r| (r - target).abs())
            .fold(0.0, f64::max)
    }

    /// Epochs where some node's estimate missed the true extremes.
    pub fn missed_epochs(&self) -> impl Iterator<Item = &EpochSummary> {
        self.epochs.iter().filter(|e| !e.captured_extremes())
    }
}

/// Runs the protocol with in-process delivery.
pub fn run(config: &RunConfig) -> Result<RunResult> {
    run_with(config, &mut Mailboxes::new(config.n()))
}

/// Runs the protocol over a caller-supplied transport.
///
/// Per iteration: fetch the digraph, build weights, exchange one round,
/// then at `k = u n'` run the epoch block. Outside failure-demo mode a split
/// decision or an estimate that misses the true extremes is an error.
pub fn run_with<D: Delivery>(config: &RunConfig, delivery: &mut D) -> Result<RunResult> {
    config.validate()?;
    let mut states: Vec<AgentState> = config.x0.iter().copied().map(AgentState::new).collect();
    let mut trace = vec![TraceRecord::capture(0, &states, false)?];
    let mut epochs = Vec::new();
    let (mut target_max, mut target_min) = (trace[0].oracle_max, trace[0].oracle_min);
    let mut u = 1;
    let mut k = 0;

    let outcome = loop {
        if k >= config.max_iters {
            break Outcome::MaxIters { k };
        }
        let g = match config.schedule.at(k) {
            Ok(g) => g,
            Err(Error::HorizonExceeded { .. }) => break Outcome::ScheduleExhausted { k },
            Err(e) => return Err(e),
        };
        let weights = WeightMatrix::column_stochastic_from(g)?;
        states = protocol_round(&states, g, &weights, delivery)?;
        k += 1;

        if k != u * config.n_prime {
            trace.push(TraceRecord::capture(k, &states, false)?);
            continue;
        }

        let (decision, next) = epoch_update(&states, config.rho);
        let mut record = TraceRecord::capture(k, &states, true)?;
        record.terminated = next.iter().map(|s| s.terminated).collect();
        let summary = EpochSummary {
            u,
            k,
            target_max,
            target_min,
            oracle_max: record.oracle_max,
            oracle_min: record.oracle_min,
            alpha_max: next.iter().map(|s| s.alpha_max).collect(),
            alpha_min: next.iter().map(|s| s.alpha_min).collect(),
            beta: next.iter().map(|s| s.beta).collect(),
            missed_max: (0..next.len()).filter(|&i| next[i].alpha_max < target_max).collect(),
            missed_min: (0..next.len()).filter(|&i| next[i].alpha_min > target_min).collect(),
            decision: decision.clone(),
        };
        if !config.failure_demo {
            if !summary.captured_extremes() {
                return Err(Error::Invariant(format!(
                    "epoch {u}: nodes {:?} missed the global extremes",
                    summary.missed_max.iter().chain(&summary.missed_min).collect::<Vec<_>>()
                )));
            }
            if let EpochDecision::Split { terminated } = &decision {
                return Err(Error::Invariant(format!(
                    "epoch {u}: only nodes {terminated:?} terminated"
                )));
            }
        }
        (target_max, target_min) = (record.oracle_max, record.oracle_min);
        trace.push(record);
        epochs.push(summary);
        states = next;

        match decision {
            EpochDecision::Continue => u += 1,
            EpochDecision::Terminate => break Outcome::Terminated { k, epoch: u },
            EpochDecision::Split { terminated } => {
                break Outcome::Split {
                    k,
                    epoch: u,
                    terminated,
                }
            }
        }
    };

    Ok(RunResult {
        outcome,
        final_states: states,
        epochs,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{CounterexampleVariant, TopologySchedule};

    fn states(x: &[f64]) -> Vec<AgentState> {
        x.iter().copied().map(AgentState::new).collect()
    }

    #[test]
    fn ratio_step_two_nodes() {
        let w = WeightMatrix::column_stochastic_from(&Digraph::complete(2)).unwrap();
        let next = ratio_step(&states(&[0.0, 1.0]), &w).unwrap();
        assert_eq!(next.iter().map(|s| s.x).collect::<Vec<_>>(), vec![0.5, 0.5]);
        assert_eq!(next.iter().map(|s| s.y).collect::<Vec<_>>(), vec![1.0, 1.0]);
        assert_eq!(next.iter().map(AgentState::ratio).collect::<Vec<_>>(), vec![0.5, 0.5]);
        // extremes untouched
        assert_eq!((next[0].z, next[1].z), (0.0, 1.0));
    }

    #[test]
    fn ratio_step_consensus_is_fixed() {
        let g = Digraph::new(4, [(1, 0), (2, 1), (3, 2), (0, 3), (2, 0)]).unwrap();
        let w = WeightMatrix::column_stochastic_from(&g).unwrap();
        let next = ratio_step(&states(&[2.5; 4]), &w).unwrap();
        for s in &next {
            assert_eq!(s.ratio(), 2.5);
        }
        let total: f64 = next.iter().map(|s| s.x).sum();
        assert!((total - 10.0).abs() < 1e-12);
    }

    #[test]
    fn ratio_step_errors() {
        let w = WeightMatrix::column_stochastic_from(&Digraph::complete(3)).unwrap();
        assert!(matches!(
            ratio_step(&states(&[1.0, 2.0]), &w),
            Err(Error::DimensionMismatch { .. })
        ));
        let mut s = states(&[1.0, 2.0, 3.0]);
        s[1].terminated = true;
        assert!(matches!(ratio_step(&s, &w), Err(Error::Invariant(_))));
    }

    #[test]
    fn maxmin_step_basics() {
        let next = maxmin_step(&states(&[5.0, 1.0]), &Digraph::complete(2)).unwrap();
        assert_eq!((next[0].z, next[1].z), (5.0, 5.0));
        assert_eq!((next[0].w, next[1].w), (1.0, 1.0));
        assert_eq!((next[0].x, next[1].x), (5.0, 1.0));

        let same = states(&[3.0; 3]);
        assert_eq!(maxmin_step(&same, &Digraph::directed_cycle(3)).unwrap(), same);
        assert!(maxmin_step(&same, &Digraph::complete(4)).is_err());
    }

    #[test]
    fn maxmin_reaches_extremes_in_n_minus_one() {
        let n = 6;
        let schedule = TopologySchedule::counterexample(CounterexampleVariant::Table1);
        let mut s = states(&[9.0, 1.0, 4.0, 4.0, 2.0, 0.5]);
        for k in 0..n - 1 {
            s = maxmin_step(&s, schedule.at(k).unwrap()).unwrap();
        }
        assert!(s.iter().all(|a| a.z == 9.0 && a.w == 0.5));
    }

    #[test]
    fn epoch_update_boundaries() {
        let mut s = states(&[1.0, 1.0]);
        s[0].z = 1.5;
        s[1].z = 1.5;
        s[0].w = 1.0;
        s[1].w = 1.0;
        // beta == rho continues
        let (d, next) = epoch_update(&s, 0.5);
        assert_eq!(d, EpochDecision::Continue);
        assert_eq!(next[0].beta, 0.5);
        assert_eq!((next[0].z, next[0].w), (1.0, 1.0));
        assert!(!next[0].terminated);

        let (d, next) = epoch_update(&s, 0.5000001);
        assert_eq!(d, EpochDecision::Terminate);
        assert!(next.iter().all(|a| a.terminated));
        // terminated nodes keep their estimates
        assert_eq!(next[1].z, 1.5);

        s[1].z = 1.0;
        let (d, _) = epoch_update(&s, 0.3);
        assert_eq!(d, EpochDecision::Split { terminated: vec![1] });
    }

    #[test]
    fn mailboxes_hand_back_inboxes_once() {
        let mut m = Mailboxes::new(1);
        let msg = Message {
            x: 1.0,
            y: 1.0,
            z: 1.0,
            w: 1.0,
        };
        m.deliver(0, 3, msg);
        assert_eq!(m.take_inbox(3), vec![(0, msg)]);
        assert!(m.take_inbox(3).is_empty());
        assert!(m.take_inbox(9).is_empty());
    }

    #[test]
    fn equal_values_stop_at_first_epoch() {
        let schedule = TopologySchedule::fixed(Digraph::directed_cycle(3)).unwrap();
        let config = RunConfig::new(schedule, vec![5.0; 3]);
        let result = run(&config).unwrap();
        assert_eq!(result.outcome, Outcome::Terminated { k: 3, epoch: 1 });
        assert_eq!(result.final_ratios(), vec![5.0; 3]);
        assert_eq!(result.spread(), 0.0);
    }

    #[test]
    fn config_validation() {
        let schedule = TopologySchedule::counterexample(CounterexampleVariant::Section5);
        let mut config = RunConfig::new(schedule, vec![1.0; 6]);
        assert_eq!(config.n_prime, 6);
        config.validate().unwrap();

        config.n_prime = 3;
        assert!(config.unsound_epoch_length());
        assert!(matches!(config.validate(), Err(Error::Config(_))));
        config.failure_demo = true;
        config.validate().unwrap();

        config.rho = 0.0;
        assert!(config.validate().is_err());
        config.rho = 0.01;
        config.x0.pop();
        assert!(matches!(config.validate(), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn disconnected_schedule_needs_failure_demo() {
        let inward = Digraph::new(3, [(0, 1), (0, 2)]).unwrap();
        let outward = Digraph::new(3, [(1, 0), (2, 0)]).unwrap();
        let schedule = TopologySchedule::periodic(vec![inward, outward], vec![0, 1]).unwrap();
        let mut config = RunConfig::new(schedule, vec![0.0, 1.0, 2.0]);
        assert!(run(&config).is_err());
        config.failure_demo = true;
        config.max_iters = 500;
        let result = run(&config).unwrap();
        assert_ne!(result.outcome.stop_iteration(), 0);
    }

    #[test]
    fn max_iters_and_exhaustion_are_reported() {
        let schedule = TopologySchedule::fixed(Digraph::directed_cycle(4)).unwrap();
        let mut config = RunConfig::new(schedule.clone(), vec![0.0, 0.0, 0.0, 100.0]);
        config.max_iters = 6;
        let result = run(&config).unwrap();
        assert_eq!(result.outcome, Outcome::MaxIters { k: 6 });
        assert!(!result.outcome.converged());
        assert_eq!(result.trace.len(), 7);

        let mut config = RunConfig::new(schedule.with_horizon(5), vec![0.0, 0.0, 0.0, 100.0]);
        config.max_iters = 100;
        assert_eq!(run(&config).unwrap().outcome, Outcome::ScheduleExhausted { k: 5 });
    }

    #[test]
    fn counterexample_sound_run() {
        let schedule = TopologySchedule::counterexample(CounterexampleVariant::Section5);
        let mut config = RunConfig::new(schedule, vec![2.0, 3.0, 2.0, 2.0, 2.0, 10.0]);
        config.n_prime = 5;
        let result = run(&config).unwrap();
        assert!(result.outcome.converged());
        assert_eq!(result.outcome.stop_iteration() % 5, 0);
        assert!(result.max_error(3.5) < 0.01);
        assert_eq!(result.missed_epochs().count(), 0);
    }

    #[test]
    fn counterexample_failure_demo_misses_maximum() {
        let schedule = TopologySchedule::counterexample(CounterexampleVariant::Section5);
        let mut config = RunConfig::new(schedule, vec![2.0, 3.0, 2.0, 2.0, 2.0, 10.0]);
        config.n_prime = 3;
        config.failure_demo = true;
        let result = run(&config).unwrap();
        let first = &result.epochs[0];
        assert_eq!(first.target_max, 10.0);
        assert_eq!(first.missed_max, vec![0, 1]);
    }
}
