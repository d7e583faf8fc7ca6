//! Brute-force reference computations: dense matrix iteration, direct
//! extrema scans and plain max/min flooding. Nothing here goes through the
//! engine's message passing.

use crate::error::{Error, Result};
use crate::graph::GraphSequence;
use crate::weights::WeightMatrix;

/// One vector per step, starting with the initial one.
pub type Trajectory = Vec<Vec<f64>>;

/// `x(k+1) = P(k) x(k)` and `y(k+1) = P(k) y(k)` for every matrix in
/// `matrices` up to `steps`. Both trajectories include the initial vector.
pub fn dense_iterate(
    matrices: &[WeightMatrix],
    x0: &[f64],
    y0: &[f64],
    steps: usize,
) -> Result<(Trajectory, Trajectory)> {
    let n = x0.len();
    if y0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: y0.len(),
        });
    }
    if matrices.len() < steps {
        return Err(Error::HorizonExceeded {
            k: matrices.len(),
            horizon: matrices.len(),
        });
    }
    let mut xs = vec![x0.to_vec()];
    let mut ys = vec![y0.to_vec()];
    for p in &matrices[..steps] {
        if p.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.dim(),
            });
        }
        let x = xs.last().expect("non-empty");
        let y = ys.last().expect("non-empty");
        let mul = |v: &[f64]| -> Vec<f64> {
            (0..n)
                .map(|i| p.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
                .collect()
        };
        let (nx, ny) = (mul(x), mul(y));
        xs.push(nx);
        ys.push(ny);
    }
    Ok((xs, ys))
}

/// `(max_i x_i / y_i, min_i x_i / y_i)`.
pub fn global_extremes(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::Domain("no nodes to take extremes over".into()));
    }
    let mut max = f64::NEG_INFINITY;
    let mut min = f64::INFINITY;
    for (i, (&xi, &yi)) in x.iter().zip(y).enumerate() {
        if yi <= 0.0 || yi.is_nan() {
            return Err(Error::Domain(format!("denominator of node {i} is {yi}")));
        }
        let r = xi / yi;
        max = max.max(r);
        min = min.min(r);
    }
    Ok((max, min))
}

pub fn true_average(x0: &[f64]) -> Result<f64> {
    if x0.is_empty() {
        return Err(Error::Domain("average of an empty vector".into()));
    }
    Ok(x0.iter().sum::<f64>() / x0.len() as f64)
}

/// Max flooding from `z0` starting at instant `k_start`:
/// `z_i(t+1) = max over in-neighbors of z_j(t)`. Includes `z0`.
pub fn brute_force_max<S: GraphSequence + ?Sized>(
    schedule: &S,
    z0: &[f64],
    k_start: usize,
    steps: usize,
) -> Result<Vec<Vec<f64>>> {
    flood(schedule, z0, k_start, steps, f64::max)
}

/// Min flooding, the dual of [`brute_force_max`].
pub fn brute_force_min<S: GraphSequence + ?Sized>(
    schedule: &S,
    w0: &[f64],
    k_start: usize,
    steps: usize,
) -> Result<Vec<Vec<f64>>> {
    flood(schedule, w0, k_start, steps, f64::min)
}

/// Both floods from the same start, as `(z trajectory, w trajectory)`.
pub fn brute_force_maxmin<S: GraphSequence + ?Sized>(
    schedule: &S,
    z0: &[f64],
    w0: &[f64],
    k_start: usize,
    steps: usize,
) -> Result<(Trajectory, Trajectory)> {
    Ok((
        brute_force_max(schedule, z0, k_start, steps)?,
        brute_force_min(schedule, w0, k_start, steps)?,
    ))
}

fn flood<S: GraphSequence + ?Sized>(
    schedule: &S,
    v0: &[f64],
    k_start: usize,
    steps: usize,
    pick: fn(f64, f64) -> f64,
) -> Result<Vec<Vec<f64>>> {
    let n = v0.len();
    if schedule.node_count() != n {
        return Err(Error::DimensionMismatch {
            expected: schedule.node_count(),
            found: n,
        });
    }
    let mut traj = vec![v0.to_vec()];
    for t in 0..steps {
        let g = schedule.graph_at(k_start + t)?;
        let cur = traj.last().expect("non-empty");
        let mut next = cur.clone();
        // edges are (receiver, sender)
        for (i, j) in g.edges() {
            next[i] = pick(next[i], cur[j]);
        }
        traj.push(next);
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Digraph;
    use crate::topology::{CounterexampleVariant, TopologySchedule};

    fn halves() -> WeightMatrix {
        WeightMatrix::from_rows(2, vec![0.5; 4]).unwrap()
    }

    #[test]
    fn zero_steps_is_identity() {
        let (xs, ys) = dense_iterate(&[], &[1.0, 2.0], &[1.0, 1.0], 0).unwrap();
        assert_eq!(xs, vec![vec![1.0, 2.0]]);
        assert_eq!(ys, vec![vec![1.0, 1.0]]);
    }

    #[test]
    fn two_node_halves() {
        let p = vec![halves(), halves()];
        let (xs, ys) = dense_iterate(&p, &[0.0, 1.0], &[1.0, 1.0], 2).unwrap();
        assert_eq!(xs[1], vec![0.5, 0.5]);
        assert_eq!(xs[2], vec![0.5, 0.5]);
        assert_eq!(ys[2], vec![1.0, 1.0]);
        assert!(dense_iterate(&p, &[0.0, 1.0], &[1.0, 1.0], 3).is_err());
        assert!(dense_iterate(&p, &[0.0, 1.0, 2.0], &[1.0, 1.0, 1.0], 1).is_err());
        assert!(dense_iterate(&p, &[0.0, 1.0], &[1.0], 1).is_err());
    }

    #[test]
    fn ratio_fixed_point() {
        let g = Digraph::new(3, [(1, 0), (2, 1), (0, 2), (2, 0)]).unwrap();
        let p = vec![WeightMatrix::column_stochastic_from(&g).unwrap(); 5];
        let (xs, ys) = dense_iterate(&p, &[4.0, 4.0, 4.0], &[1.0; 3], 5).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            for (a, b) in x.iter().zip(y) {
                assert!((a / b - 4.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn extremes() {
        let x = [2.0, 3.0, 2.0, 2.0, 2.0, 10.0];
        assert_eq!(global_extremes(&x, &[1.0; 6]).unwrap(), (10.0, 2.0));
        assert_eq!(global_extremes(&[7.0; 3], &[1.0; 3]).unwrap(), (7.0, 7.0));
        assert_eq!(global_extremes(&[0.0, 1.0], &[1.0, 1.0]).unwrap(), (1.0, 0.0));
        assert!(matches!(global_extremes(&[1.0], &[0.0]), Err(Error::Domain(_))));
        assert!(global_extremes(&[1.0], &[-1.0]).is_err());
        assert!(global_extremes(&[], &[]).is_err());
    }

    #[test]
    fn averages() {
        assert_eq!(true_average(&[2.0, 3.0, 2.0, 2.0, 2.0, 10.0]).unwrap(), 3.5);
        assert_eq!(true_average(&[0.0; 4]).unwrap(), 0.0);
        assert_eq!(true_average(&[0.0, 1.0]).unwrap(), 0.5);
        assert!(true_average(&[]).is_err());
    }

    #[test]
    fn flooding_constant_input() {
        let s = TopologySchedule::random_pool(5, 4, 2).unwrap();
        let traj = brute_force_max(&s, &[1.5; 4], 3, 6).unwrap();
        assert!(traj.iter().all(|z| z == &vec![1.5; 4]));
    }

    #[test]
    fn table1_value_reaches_last_node_at_step_five() {
        let s = TopologySchedule::counterexample(CounterexampleVariant::Table1);
        let mut z0 = vec![0.0; 6];
        z0[0] = 1.0;
        let traj = brute_force_max(&s, &z0, 0, 5).unwrap();
        let arrival = traj.iter().position(|z| z[5] == 1.0);
        assert_eq!(arrival, Some(5));
        assert!(traj[5].iter().all(|&v| v == 1.0));
        let (_, w) = brute_force_maxmin(&s, &z0, &z0, 0, 5).unwrap();
        assert_eq!(w[5], vec![0.0; 6]);
    }

    #[test]
    fn flooding_horizon() {
        let s = TopologySchedule::fixed(Digraph::complete(3)).unwrap().with_horizon(2);
        assert!(brute_force_max(&s, &[1.0, 2.0, 3.0], 0, 3).is_err());
        assert!(brute_force_max(&s, &[1.0, 2.0], 0, 1).is_err());
    }
}
