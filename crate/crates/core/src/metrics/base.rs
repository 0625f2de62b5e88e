//! Base tallies over the DAG (dependency count D, use count U, chain length
//! L) and the closed-form quality scores built from them.
//!
//! The tallies are generic over the counting scalar: `f64` is the production
//! choice (sums saturate to +infinity instead of wrapping, preserving order),
//! `BigUint` gives exact values for cross-checking. Each pass is one sweep in
//! topological (= index) order.

use crate::graph::ProofGraph;
use crate::num::{Count, Real};

/// Recursive dependency count.
///
/// `D(i) = 1` when `i` is named or an axiom; otherwise the sum of `D` over
/// the direct dependencies (so an unnamed non-axiom leaf gets 0). Counts the
/// number of ways proofs of named statements unfold through `i`, honoring
/// edge multiplicity.
///
/// `named` overrides the graph's own name flags so selection can re-tally
/// against a grown set without rebuilding the graph.
pub fn dependency_counts<C: Count>(graph: &ProofGraph, named: &[bool]) -> Vec<C> {
    let mut counts: Vec<C> = Vec::with_capacity(graph.len());
    for (id, node) in graph.iter() {
        let i = (id - 1) as usize;
        let value = if named[i] || graph.is_axiom(id) {
            C::one()
        } else {
            node.deps
                .iter()
                .fold(C::zero(), |acc, &d| acc + counts[(d - 1) as usize].clone())
        };
        counts.push(value);
    }
    counts
}

/// Recursive use count: the mirror image of [`dependency_counts`].
///
/// `U(i) = 1` when `i` is named; otherwise the sum of `U` over the direct
/// users. One sweep in descending index order.
pub fn use_counts<C: Count>(graph: &ProofGraph, named: &[bool]) -> Vec<C> {
    let n = graph.len();
    let mut counts = vec![C::zero(); n];
    for id in (1..=n as u32).rev() {
        let i = (id - 1) as usize;
        counts[i] = if named[i] {
            C::one()
        } else {
            graph
                .users(id)
                .iter()
                .fold(C::zero(), |acc, &u| acc + counts[(u - 1) as usize].clone())
        };
    }
    counts
}

/// Longest chain of inferences below each lemma.
///
/// `L(i) = 1` when `i` is named or an axiom; otherwise
/// `max over deps (1 + L(dep))`, with 0 for an unnamed non-axiom leaf.
pub fn chain_lengths<C: Count>(graph: &ProofGraph, named: &[bool]) -> Vec<C> {
    let mut lengths: Vec<C> = Vec::with_capacity(graph.len());
    for (id, node) in graph.iter() {
        let i = (id - 1) as usize;
        let value = if named[i] || graph.is_axiom(id) {
            C::one()
        } else {
            node.deps
                .iter()
                .map(|&d| lengths[(d - 1) as usize].clone() + C::one())
                .fold(C::zero(), |acc, x| if x > acc { x } else { acc })
        };
        lengths.push(value);
    }
    lengths
}

/// `a * b` with the convention that a zero factor wins over an infinite one.
/// Keeps `0 * inf` (a saturated count times an unused lemma) at 0 instead of
/// NaN.
fn prod<R: Real>(a: R, b: R) -> R {
    if a.is_zero() || b.is_zero() {
        R::zero()
    } else {
        a * b
    }
}

/// `Q1(i) = U(i) * D(i) / S(i)`.
pub fn q1<R: Real>(graph: &ProofGraph, d: &[R], u: &[R]) -> Vec<R> {
    graph
        .iter()
        .map(|(id, node)| {
            let i = (id - 1) as usize;
            prod(u[i], d[i]) / R::from_u32(node.size).unwrap()
        })
        .collect()
}

/// `Q1^r(i) = U(i)^r * D(i)^(2-r) / S(i)`; `r = 1` recovers `Q1`, `r = 0`
/// and `r = 2` weigh only dependencies or only uses.
pub fn q1r<R: Real>(graph: &ProofGraph, d: &[R], u: &[R], r: R) -> Vec<R> {
    let two = R::from_u32(2).unwrap();
    graph
        .iter()
        .map(|(id, node)| {
            let i = (id - 1) as usize;
            prod(u[i].powf(r), d[i].powf(two - r)) / R::from_u32(node.size).unwrap()
        })
        .collect()
}

/// `Q2(i) = U(i) * D(i) / S(i)^2`.
pub fn q2<R: Real>(graph: &ProofGraph, d: &[R], u: &[R]) -> Vec<R> {
    graph
        .iter()
        .map(|(id, node)| {
            let i = (id - 1) as usize;
            let s = R::from_u32(node.size).unwrap();
            prod(u[i], d[i]) / (s * s)
        })
        .collect()
}

/// `Q3(i) = U(i) * D(i) / 1.1^S(i)`, evaluated in log space because the
/// denominator overflows doubles for statement sizes in the thousands.
pub fn q3<R: Real>(graph: &ProofGraph, d: &[R], u: &[R]) -> Vec<R> {
    let ln_base = R::from_f64(1.1).unwrap().ln();
    graph
        .iter()
        .map(|(id, node)| {
            let i = (id - 1) as usize;
            if u[i].is_zero() || d[i].is_zero() {
                R::zero()
            } else {
                (u[i].ln() + d[i].ln() - R::from_u32(node.size).unwrap() * ln_base).exp()
            }
        })
        .collect()
}

/// `EQ1(i) = D(i) / S(i)`.
pub fn eq1<R: Real>(graph: &ProofGraph, d: &[R]) -> Vec<R> {
    graph
        .iter()
        .map(|(id, node)| d[(id - 1) as usize] / R::from_u32(node.size).unwrap())
        .collect()
}

/// `EQ2(i) = L(i) / S(i)`.
pub fn eq2<R: Real>(graph: &ProofGraph, l: &[R]) -> Vec<R> {
    graph
        .iter()
        .map(|(id, node)| l[(id - 1) as usize] / R::from_u32(node.size).unwrap())
        .collect()
}
