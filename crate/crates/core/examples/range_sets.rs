//! Which nodes can influence node 1 after t steps, and the shortest
//! time-respecting path from node 1 to node 6.

use ratio_consensus::graph::{find_time_path, range_sets};
use ratio_consensus::topology::{counterexample_g1, counterexample_g2};
use ratio_consensus::{CounterexampleVariant, TopologySchedule};

fn main() -> ratio_consensus::Result<()> {
    println!("diameters: G1={} G2={}", counterexample_g1().diameter()?, counterexample_g2().diameter()?);

    let s = TopologySchedule::counterexample(CounterexampleVariant::Table1);
    for (t, set) in range_sets(&s, 0, 0, 5)?.iter().enumerate() {
        let labels: Vec<usize> = set.iter().map(|v| v + 1).collect();
        println!("R_1(0,{t}) = {labels:?}");
    }

    let path = find_time_path(&s, 0, 5, 0)?;
    let labels: Vec<usize> = path.nodes().iter().map(|v| v + 1).collect();
    println!("time-path 1 -> 6: {labels:?}, length {}", path.length);
    Ok(())
}
