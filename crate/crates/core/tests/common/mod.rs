//! Reference implementations used by the acceptance suite.
//!
//! Everything here is written for transparency, not speed: top-down
//! recursion with an explicit memo table, dense matrices, linear scans.
//! The production code must agree with these within the stated tolerances.

use std::collections::BTreeSet;

use lemma_forge::graph::TagSet;
use lemma_forge::trace::ProofTrace;
use lemma_forge::{LemmaId, Score};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Transparent tally evaluator over a raw trace: memoized top-down
/// recursion in exact integers, with reverse adjacency rebuilt by a plain
/// quadratic scan.
pub struct Oracle<'t> {
    trace: &'t ProofTrace,
    named: Vec<bool>,
    axiom: Vec<bool>,
    users: Vec<Vec<LemmaId>>,
}

impl<'t> Oracle<'t> {
    pub fn new(trace: &'t ProofTrace, named: &BTreeSet<LemmaId>, axiom_tags: TagSet) -> Self {
        let n = trace.len();
        let named = (1..=n as LemmaId).map(|i| named.contains(&i)).collect();
        let axiom = trace
            .nodes()
            .iter()
            .map(|node| axiom_tags.contains(node.kind))
            .collect();
        let mut users = vec![Vec::new(); n];
        for (id, node) in trace.iter() {
            for &dep in &node.deps {
                users[(dep - 1) as usize].push(id);
            }
        }
        Oracle {
            trace,
            named,
            axiom,
            users,
        }
    }

    fn d_rec(&self, id: LemmaId, memo: &mut Vec<Option<BigUint>>) -> BigUint {
        let i = (id - 1) as usize;
        if let Some(v) = &memo[i] {
            return v.clone();
        }
        let v = if self.named[i] || self.axiom[i] {
            BigUint::one()
        } else {
            let mut sum = BigUint::zero();
            for &dep in &self.trace.node(id).deps {
                sum += self.d_rec(dep, memo);
            }
            sum
        };
        memo[i] = Some(v.clone());
        v
    }

    pub fn d(&self) -> Vec<BigUint> {
        let mut memo = vec![None; self.trace.len()];
        (1..=self.trace.len() as LemmaId)
            .map(|id| self.d_rec(id, &mut memo))
            .collect()
    }

    fn u_rec(&self, id: LemmaId, memo: &mut Vec<Option<BigUint>>) -> BigUint {
        let i = (id - 1) as usize;
        if let Some(v) = &memo[i] {
            return v.clone();
        }
        let v = if self.named[i] {
            BigUint::one()
        } else {
            let mut sum = BigUint::zero();
            for &user in &self.users[i] {
                sum += self.u_rec(user, memo);
            }
            sum
        };
        memo[i] = Some(v.clone());
        v
    }

    pub fn u(&self) -> Vec<BigUint> {
        let mut memo = vec![None; self.trace.len()];
        (1..=self.trace.len() as LemmaId)
            .map(|id| self.u_rec(id, &mut memo))
            .collect()
    }

    fn l_rec(&self, id: LemmaId, memo: &mut Vec<Option<BigUint>>) -> BigUint {
        let i = (id - 1) as usize;
        if let Some(v) = &memo[i] {
            return v.clone();
        }
        let v = if self.named[i] || self.axiom[i] {
            BigUint::one()
        } else {
            let mut best = BigUint::zero();
            for &dep in &self.trace.node(id).deps {
                let cand = self.l_rec(dep, memo) + BigUint::one();
                if cand > best {
                    best = cand;
                }
            }
            best
        };
        memo[i] = Some(v.clone());
        v
    }

    pub fn l(&self) -> Vec<BigUint> {
        let mut memo = vec![None; self.trace.len()];
        (1..=self.trace.len() as LemmaId)
            .map(|id| self.l_rec(id, &mut memo))
            .collect()
    }
}

/// Literal, memo-free recursive dependency count — exponential time, only
/// for tiny traces; validates the memoized oracle itself.
pub fn naive_d(trace: &ProofTrace, named: &[bool], axiom: &[bool], id: LemmaId) -> BigUint {
    let i = (id - 1) as usize;
    if named[i] || axiom[i] {
        return BigUint::one();
    }
    trace
        .node(id)
        .deps
        .iter()
        .map(|&dep| naive_d(trace, named, axiom, dep))
        .sum()
}

/// Exact tally converted to a double, or `None` when the integer exceeds
/// what a double represents exactly.
pub fn exact_to_f64(v: &BigUint) -> Option<f64> {
    if v.bits() <= 53 {
        v.to_f64()
    } else {
        None
    }
}

/// Dense power-iteration rank oracle. `out[j]` lists the targets `j`
/// distributes its mass to (with multiplicity); empty means dangling. Uses
/// an explicitly materialized n-by-n transition matrix.
pub fn dense_pagerank(out: &[Vec<usize>], damping: f64, tol: f64, max_iters: u32) -> Vec<f64> {
    let n = out.len();
    assert!(n > 0);
    let mut matrix = vec![vec![0.0f64; n]; n];
    for (j, targets) in out.iter().enumerate() {
        if targets.is_empty() {
            for row in matrix.iter_mut() {
                row[j] = 1.0 / n as f64;
            }
        } else {
            let share = 1.0 / targets.len() as f64;
            for &i in targets {
                matrix[i][j] += share;
            }
        }
    }

    let mut x = vec![1.0 / n as f64; n];
    for _ in 0..max_iters {
        let mut next = vec![0.0f64; n];
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                acc += matrix[i][j] * x[j];
            }
            next[i] = (1.0 - damping) / n as f64 + damping * acc;
        }
        let delta: f64 = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        x = next;
        if delta < tol {
            break;
        }
    }
    x
}

/// Forward out-sets (each node hands mass to its dependencies) as plain
/// 0-based lists for [`dense_pagerank`].
pub fn forward_out_sets(trace: &ProofTrace) -> Vec<Vec<usize>> {
    trace
        .nodes()
        .iter()
        .map(|node| node.deps.iter().map(|&d| (d - 1) as usize).collect())
        .collect()
}

/// Reverse out-sets (each node hands mass to its users).
pub fn reverse_out_sets(trace: &ProofTrace) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); trace.len()];
    for (id, node) in trace.iter() {
        for &dep in &node.deps {
            out[(dep - 1) as usize].push((id - 1) as usize);
        }
    }
    out
}

/// Which quality formula the naive selection reference evaluates.
#[derive(Clone, Copy)]
pub enum NaiveMetric {
    Q1,
    Q1R(f64),
    Q2,
    Q3,
    Eq1,
    Eq2,
}

/// Transparent re-implementation of greedy selection: every round fully
/// recomputes the tallies by top-down recursion in doubles, evaluates the
/// formula directly, and scans linearly for the argmax (lowest index wins
/// ties).
pub fn naive_best_lemmas(
    trace: &ProofTrace,
    axiom_tags: TagSet,
    named0: &BTreeSet<LemmaId>,
    metric: NaiveMetric,
    m: usize,
) -> Vec<(LemmaId, Score)> {
    let n = trace.len();
    let axiom: Vec<bool> = trace
        .nodes()
        .iter()
        .map(|node| axiom_tags.contains(node.kind))
        .collect();
    let mut users = vec![Vec::new(); n];
    for (id, node) in trace.iter() {
        for &dep in &node.deps {
            users[(dep - 1) as usize].push(id);
        }
    }

    fn d_rec(trace: &ProofTrace, named: &[bool], axiom: &[bool], id: LemmaId,
             memo: &mut Vec<Option<f64>>) -> f64 {
        let i = (id - 1) as usize;
        if let Some(v) = memo[i] {
            return v;
        }
        let v = if named[i] || axiom[i] {
            1.0
        } else {
            let mut sum = 0.0;
            for &dep in &trace.node(id).deps {
                sum += d_rec(trace, named, axiom, dep, memo);
            }
            sum
        };
        memo[i] = Some(v);
        v
    }
    fn u_rec(trace: &ProofTrace, named: &[bool], users: &[Vec<LemmaId>], id: LemmaId,
             memo: &mut Vec<Option<f64>>) -> f64 {
        let i = (id - 1) as usize;
        if let Some(v) = memo[i] {
            return v;
        }
        let v = if named[i] {
            1.0
        } else {
            let mut sum = 0.0;
            for &user in &users[i] {
                sum += u_rec(trace, named, users, user, memo);
            }
            sum
        };
        memo[i] = Some(v);
        v
    }
    fn l_rec(trace: &ProofTrace, named: &[bool], axiom: &[bool], id: LemmaId,
             memo: &mut Vec<Option<f64>>) -> f64 {
        let i = (id - 1) as usize;
        if let Some(v) = memo[i] {
            return v;
        }
        let v = if named[i] || axiom[i] {
            1.0
        } else {
            let mut best = 0.0f64;
            for &dep in &trace.node(id).deps {
                best = best.max(l_rec(trace, named, axiom, dep, memo) + 1.0);
            }
            best
        };
        memo[i] = Some(v);
        v
    }

    let mut named: Vec<bool> = (1..=n as LemmaId)
        .map(|i| named0.contains(&i))
        .collect();
    let mut chosen = Vec::new();
    for _ in 0..m {
        let mut d_memo = vec![None; n];
        let mut u_memo = vec![None; n];
        let mut l_memo = vec![None; n];
        let mut best: Option<(LemmaId, f64)> = None;
        for (id, node) in trace.iter() {
            let i = (id - 1) as usize;
            if named[i] || axiom[i] {
                continue;
            }
            let s = node.size as f64;
            let d = d_rec(trace, &named, &axiom, id, &mut d_memo);
            let u = u_rec(trace, &named, &users, id, &mut u_memo);
            let guarded = |a: f64, b: f64| if a == 0.0 || b == 0.0 { 0.0 } else { a * b };
            let score = match metric {
                NaiveMetric::Q1 => guarded(u, d) / s,
                NaiveMetric::Q1R(r) => guarded(u.powf(r), d.powf(2.0 - r)) / s,
                NaiveMetric::Q2 => guarded(u, d) / (s * s),
                NaiveMetric::Q3 => {
                    if u == 0.0 || d == 0.0 {
                        0.0
                    } else {
                        (u.ln() + d.ln() - s * 1.1f64.ln()).exp()
                    }
                }
                NaiveMetric::Eq1 => d / s,
                NaiveMetric::Eq2 => l_rec(trace, &named, &axiom, id, &mut l_memo) / s,
            };
            if best.map_or(true, |(_, b)| score > b) {
                best = Some((id, score));
            }
        }
        match best {
            Some((id, score)) => {
                named[(id - 1) as usize] = true;
                chosen.push((id, score));
            }
            None => break,
        }
    }
    chosen
}
