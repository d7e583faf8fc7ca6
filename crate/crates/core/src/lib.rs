//! Average consensus over switching directed networks with a distributed
//! finite-time stopping rule.
//!
//! Nodes run ratio (push-sum) consensus with column-stochastic weights and,
//! in parallel, flood the running maximum and minimum of their ratios. Every
//! `n'` iterations each node compares the flooded extremes and stops once
//! their gap drops below a tolerance. When `n'` is at least `n - 1` and
//! every instant's digraph is strongly connected, all nodes stop at the same
//! iteration with ratios within the tolerance of the true average.
//!
//! Modules:
//!
//! - [`graph`]: digraphs, strong connectivity, diameter, range sets and
//!   time-paths.
//! - [`topology`]: schedules of digraphs over time and union-connectivity
//!   checks.
//! - [`weights`]: column-stochastic weight matrices.
//! - [`engine`]: the per-node protocol and the run loop.
//! - [`oracle`]: dense reference computations used to check the engine.
//! - [`io`]: schedule files, trace tables and run summaries.
//! - [`cli`]: the command-line driver.

pub mod cli;
pub mod engine;
pub mod error;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod topology;
pub mod weights;

pub use engine::{AgentState, Outcome, RunConfig, RunResult};
pub use error::{Error, Result};
pub use graph::{Digraph, TimePath};
pub use topology::{CounterexampleVariant, ScheduleSpec, TopologySchedule};
pub use weights::WeightMatrix;
