//! Column-stochastic weight matrices supported on a digraph's edges.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Digraph;

/// Allowed deviation of a column sum from 1.
pub const COLUMN_SUM_TOLERANCE: f64 = 1e-12;

/// Dense `n x n` weights; entry `(i, j)` is the share of node `j`'s value
/// that node `i` receives.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl WeightMatrix {
    /// Row-major entries.
    pub fn from_rows(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        Ok(WeightMatrix { n, entries })
    }

    /// Every sender splits its mass equally among its out-neighbors,
    /// itself included: `p_ij = 1 / |out(j)|` for each out-neighbor `i`.
    pub fn column_stochastic_from(g: &Digraph) -> Result<Self> {
        g.require_self_loops()?;
        let n = g.node_count();
        let mut entries = vec![0.0; n * n];
        for j in 0..n {
            let receivers = g.out_neighbors(j)?;
            let share = 1.0 / receivers.len() as f64;
            for &i in receivers {
                entries[i * n + j] = share;
            }
        }
        Ok(WeightMatrix { n, entries })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn column_sum(&self, j: usize) -> f64 {
        (0..self.n).map(|i| self.get(i, j)).sum()
    }

    /// Digraph with an edge `(i, j)` wherever `p_ij > 0`.
    pub fn support(&self) -> Digraph {
        let n = self.n;
        Digraph::from_raw_edges(
            n,
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| self.get(i, j) > 0.0),
        )
        .expect("indices are in range")
    }

    pub fn validate(&self, g: &Digraph) -> Result<WeightReport> {
        validate(self, g)
    }
}

/// Outcome of [`validate`]; each flag is one structural check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightReport {
    pub column_stochastic: bool,
    pub support_matches: bool,
    pub nonnegative: bool,
    pub irreducible: bool,
    /// Certified structurally: irreducible with a positive diagonal.
    /// Sufficient for primitivity, not necessary.
    pub primitive: bool,
    pub failures: Vec<String>,
}

impl WeightReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for WeightReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return f.write_str("all weight checks passed");
        }
        write!(f, "{}", self.failures.join("; "))
    }
}

/// Checks column sums, support, sign, irreducibility and (structural)
/// primitivity of `w` against the digraph `g` it should be built on.
pub fn validate(w: &WeightMatrix, g: &Digraph) -> Result<WeightReport> {
    let n = w.dim();
    if g.node_count() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: g.node_count(),
        });
    }
    let mut failures = Vec::new();

    let bad_columns: Vec<usize> = (0..n)
        .filter(|&j| (w.column_sum(j) - 1.0).abs() > COLUMN_SUM_TOLERANCE)
        .collect();
    if !bad_columns.is_empty() {
        failures.push(format!("columns {bad_columns:?} do not sum to 1"));
    }

    let nonnegative = w.entries.iter().all(|&p| p >= 0.0 && p.is_finite());
    if !nonnegative {
        failures.push("negative or non-finite entry".to_string());
    }

    let support = w.support();
    let support_matches = support.edges().eq(g.edges());
    if !support_matches {
        failures.push("positive entries do not match the digraph's edges".to_string());
    }

    let irreducible = support.is_strongly_connected();
    if !irreducible {
        failures.push("support digraph is not strongly connected".to_string());
    }

    let positive_diagonal = (0..n).all(|i| w.get(i, i) > 0.0);
    let primitive = irreducible && positive_diagonal;
    if !primitive {
        failures.push("cannot certify primitivity".to_string());
    }

    Ok(WeightReport {
        column_stochastic: bad_columns.is_empty(),
        support_matches,
        nonnegative,
        irreducible,
        primitive,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_pair_is_uniform() {
        let w = WeightMatrix::column_stochastic_from(&Digraph::complete(2)).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(w.get(i, j), 0.5);
            }
        }
    }

    #[test]
    fn self_looped_only_node_keeps_its_mass() {
        // node 2 only has its self-loop as an outgoing edge
        let g = Digraph::new(3, [(1, 0), (0, 1), (2, 0)]).unwrap();
        let w = WeightMatrix::column_stochastic_from(&g).unwrap();
        assert_eq!((w.get(0, 2), w.get(1, 2), w.get(2, 2)), (0.0, 0.0, 1.0));
    }

    #[test]
    fn directed_cycle_columns() {
        let w = WeightMatrix::column_stochastic_from(&Digraph::directed_cycle(3)).unwrap();
        for j in 0..3 {
            let column: Vec<f64> = (0..3).map(|i| w.get(i, j)).collect();
            assert_eq!(column.iter().filter(|&&p| p == 0.5).count(), 2);
            assert_eq!(w.get(j, j), 0.5);
            assert_eq!(w.get((j + 1) % 3, j), 0.5);
        }
    }

    #[test]
    fn missing_self_loop_rejected() {
        let g = Digraph::from_raw_edges(2, [(0, 1), (1, 0), (0, 0)]).unwrap();
        assert!(matches!(
            WeightMatrix::column_stochastic_from(&g),
            Err(Error::MissingSelfLoop { node: 1 })
        ));
    }

    #[test]
    fn constructed_weights_validate() {
        let g = Digraph::new(4, [(1, 0), (2, 1), (3, 2), (0, 3), (2, 0)]).unwrap();
        let w = WeightMatrix::column_stochastic_from(&g).unwrap();
        let report = validate(&w, &g).unwrap();
        assert!(report.passed(), "{report}");
        assert!(report.primitive);
    }

    #[test]
    fn short_column_fails_sum_check() {
        let g = Digraph::complete(2);
        let w = WeightMatrix::from_rows(2, vec![0.5, 0.5, 0.4, 0.5]).unwrap();
        let report = validate(&w, &g).unwrap();
        assert!(!report.column_stochastic);
        assert!(report.support_matches);
        assert!(!report.passed());
    }

    #[test]
    fn reducible_support_detected() {
        let g = Digraph::new(2, [(0, 1)]).unwrap();
        let w = WeightMatrix::column_stochastic_from(&g).unwrap();
        let report = validate(&w, &g).unwrap();
        assert!(report.column_stochastic);
        assert!(!report.irreducible);
        assert!(!report.primitive);
    }

    #[test]
    fn support_mismatch_and_negativity() {
        let g = Digraph::complete(2);
        let w = WeightMatrix::from_rows(2, vec![1.0, 1.5, 0.0, -0.5]).unwrap();
        let report = validate(&w, &g).unwrap();
        assert!(!report.nonnegative);
        assert!(!report.support_matches);
        assert!(validate(&w, &Digraph::complete(3)).is_err());
        assert!(WeightMatrix::from_rows(2, vec![1.0]).is_err());
    }
}
