//! Epoch length equal to the largest diameter misses the true extremes on
//! the switching 6-node schedule; n - 1 never does.

use ratio_consensus::cli::counterexample_comparison;

fn main() -> ratio_consensus::Result<()> {
    let cmp = counterexample_comparison(0.01, 1000)?;
    print!("{}", cmp.report());
    for e in cmp.short.missed_epochs() {
        println!(
            "n'=3 epoch {} (k={}): alpha_max={:?} true max={}",
            e.u, e.k, e.alpha_max, e.target_max
        );
    }
    Ok(())
}
