//! PageRank over the inference DAG, in both edge directions.
//!
//! Forward rank follows dependency edges: a lemma is important if many
//! important lemmas use it. Reverse rank follows use edges: a lemma is
//! important if it depends on many important lemmas. Both solve
//!
//! ```text
//! x(i) = (1 - f) / N + f * sum over j with i in out(j) of x(j) / |out(j)|
//! ```
//!
//! by power iteration, where `out(j)` is `d(j)` forward and `u(j)` reverse.
//! Nodes with an empty out-set spread their mass uniformly, which keeps the
//! total at exactly 1.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::ProofGraph;
use crate::metrics::MetricParams;
use crate::num::Real;

/// Which way rank flows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Along dependency edges: users pass rank to their dependencies.
    Forward,
    /// Along use edges: dependencies pass rank to their users.
    Reverse,
}

/// Receivers with at least this many nodes split the per-iteration update
/// across the thread pool; below it the parallelism overhead dominates.
const PAR_THRESHOLD: usize = 4096;

/// Power-iterates to the stationary rank vector.
///
/// Stops when the L1 change of one step drops below `params.pr_tolerance`
/// or after `params.pr_max_iters` steps. The update is accumulated per
/// receiving node over that node's in-edges in a fixed order, so results are
/// bit-identical for any thread count.
pub fn pagerank<R: Real + Send + Sync>(
    graph: &ProofGraph,
    params: &MetricParams,
    direction: Direction,
) -> Result<Vec<R>> {
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    params.validate()?;

    let n = graph.len();
    let f = R::from_f64(params.damping).unwrap();
    let n_real = R::from_usize(n).unwrap();
    let base = (R::one() - f) / n_real;

    // Out-degree in the chosen direction; None marks a dangling node.
    let inv_out: Vec<Option<R>> = (1..=n as u32)
        .map(|id| {
            let deg = match direction {
                Direction::Forward => graph.deps(id).len(),
                Direction::Reverse => graph.users(id).len(),
            };
            (deg > 0).then(|| R::one() / R::from_usize(deg).unwrap())
        })
        .collect();

    let mut x = vec![R::one() / n_real; n];
    let mut next = vec![R::zero(); n];

    for _ in 0..params.pr_max_iters {
        let dangling: R = x
            .iter()
            .zip(&inv_out)
            .filter(|(_, inv)| inv.is_none())
            .map(|(&xi, _)| xi)
            .sum();
        let shared = base + f * dangling / n_real;

        let update = |(i, slot): (usize, &mut R)| {
            let id = (i + 1) as u32;
            let in_edges = match direction {
                Direction::Forward => graph.users(id),
                Direction::Reverse => graph.deps(id),
            };
            let mut acc = R::zero();
            for &j in in_edges {
                let j = (j - 1) as usize;
                acc += x[j] * inv_out[j].expect("in-edge source has an out-edge");
            }
            *slot = shared + f * acc;
        };
        if n >= PAR_THRESHOLD {
            next.par_iter_mut().enumerate().for_each(update);
        } else {
            next.iter_mut().enumerate().for_each(update);
        }

        let delta: R = x.iter().zip(&next).map(|(&a, &b)| (a - b).abs()).sum();
        std::mem::swap(&mut x, &mut next);
        if delta < R::from_f64(params.pr_tolerance).unwrap() {
            break;
        }
    }
    Ok(x)
}
