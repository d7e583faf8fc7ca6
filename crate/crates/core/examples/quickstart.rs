//! Average five values over a directed ring and stop once every node
//! agrees to within rho.

use ratio_consensus::{engine, Digraph, RunConfig, TopologySchedule};

fn main() -> ratio_consensus::Result<()> {
    let schedule = TopologySchedule::fixed(Digraph::directed_cycle(5))?;
    let x0 = vec![1.0, 4.0, 2.0, 8.0, 5.0];
    let mut config = RunConfig::new(schedule, x0.clone());
    config.n_prime = 4;
    config.rho = 1e-3;

    let result = engine::run(&config)?;
    let avg = x0.iter().sum::<f64>() / x0.len() as f64;
    println!("outcome: {:?}", result.outcome);
    println!("average {avg}, final ratios {:?}", result.final_ratios());
    for e in &result.epochs {
        let beta = e.beta.iter().copied().fold(0.0, f64::max);
        println!("epoch {} at k={}: beta={beta:.3e}", e.u, e.k);
    }
    Ok(())
}
