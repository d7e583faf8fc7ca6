//! Fifty 10-node runs over a pool of 100 random strongly connected graphs.

use ratio_consensus::cli::uniform_x0;
use ratio_consensus::{engine, oracle, RunConfig, TopologySchedule};

fn main() -> ratio_consensus::Result<()> {
    let mut worst_err: f64 = 0.0;
    let mut worst_spread: f64 = 0.0;
    for seed in 0..50 {
        let schedule = TopologySchedule::random_pool(100, 10, seed)?;
        let x0 = uniform_x0(10, 1_000 + seed);
        let mut config = RunConfig::new(schedule, x0.clone());
        config.n_prime = 10;
        config.rho = 0.01;
        let result = engine::run(&config)?;
        let avg = oracle::true_average(&x0)?;
        worst_err = worst_err.max(result.max_error(avg));
        worst_spread = worst_spread.max(result.spread());
        if seed < 5 {
            println!("seed {seed}: {:?}", result.outcome);
        }
    }
    println!("worst spread {worst_spread:.3e}, worst distance to average {worst_err:.3e}");
    Ok(())
}
