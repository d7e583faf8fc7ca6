//! Build equal-split weights for a digraph and check their structure.

use ratio_consensus::weights::validate;
use ratio_consensus::{Digraph, WeightMatrix};

fn show(name: &str, g: &Digraph) -> ratio_consensus::Result<()> {
    let w = WeightMatrix::column_stochastic_from(g)?;
    println!("{name}:");
    for i in 0..w.dim() {
        let row: Vec<String> = w.row(i).iter().map(|v| format!("{v:.3}")).collect();
        println!("  [{}]", row.join(" "));
    }
    let report = validate(&w, g)?;
    println!("  {report:?}\n  passed: {}", report.passed());
    Ok(())
}

fn main() -> ratio_consensus::Result<()> {
    // 0 sends to 1 and 2, 1 sends to 2, 2 sends to 0
    show("connected", &Digraph::new(3, [(1, 0), (2, 0), (2, 1), (0, 2)])?)?;
    show("one-way", &Digraph::new(3, [(1, 0), (2, 1)])?)?;
    Ok(())
}
