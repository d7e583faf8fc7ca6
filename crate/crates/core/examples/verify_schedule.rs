//! Save a schedule window to text, load it back and check union
//! connectivity.

use ratio_consensus::io;
use ratio_consensus::topology::verify_union_connectivity;
use ratio_consensus::{Digraph, TopologySchedule};

fn main() -> ratio_consensus::Result<()> {
    let dir = std::env::temp_dir().join("ratio-consensus-verify");
    std::fs::create_dir_all(&dir).map_err(|e| ratio_consensus::Error::Config(e.to_string()))?;
    let path = dir.join("pool.txt");

    let pool = TopologySchedule::random_pool(20, 6, 11)?;
    io::write_schedule_window(&pool, 30, &path)?;
    let loaded = io::read_schedule(&path)?;
    println!("{}\n", verify_union_connectivity(&loaded, 1, 30)?);

    // each instant connects only one pair; the union needs three instants
    let pairs = [(0, 1), (1, 2), (2, 3), (3, 0)];
    let sparse: Vec<Digraph> = (0..12)
        .map(|k| {
            let (a, b) = pairs[k % 4];
            Digraph::undirected(4, [(a, b)])
        })
        .collect::<Result<_, _>>()?;
    let sparse = TopologySchedule::explicit(sparse)?;
    for l in [2, 3] {
        println!("l={l}:\n{}\n", verify_union_connectivity(&sparse, l, 12)?);
    }
    Ok(())
}
