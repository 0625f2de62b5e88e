//! Evaluation scenarios built on top of selection: the derived dependency
//! graph over a chosen theorem set, premise problems at several honesty
//! levels, chain-level bookkeeping, and honest re-runs over trace prefixes.
//!
//! The common primitive is the nearest-member frontier: starting from a
//! lemma, follow dependency edges, stop at the first member of an anchor set
//! on each path, and collect those stopping points. Everything here reduces
//! to frontiers plus the selection loop.

use std::collections::{BTreeMap, BTreeSet};
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::graph::ProofGraph;
use crate::metrics::{MetricId, MetricParams};
use crate::select::{best_lemmas, SelectionResult};
use crate::LemmaId;

/// Memoized nearest-member frontiers for one fixed anchor set.
///
/// `reach(i)` is `{i}` when `i` is an anchor, otherwise the union of
/// `reach` over `d(i)`. Sets are shared via `Rc`, and the traversal is an
/// explicit stack so million-node chains cannot overflow the call stack.
struct FrontierCache<'a> {
    graph: &'a ProofGraph,
    member: Vec<bool>,
    memo: Vec<Option<Rc<Vec<LemmaId>>>>,
}

impl<'a> FrontierCache<'a> {
    fn new(graph: &'a ProofGraph, anchors: &BTreeSet<LemmaId>) -> Result<Self> {
        let n = graph.len();
        let mut member = vec![false; n];
        for &id in anchors {
            if id == 0 || id as usize > n {
                return Err(Error::IndexOutOfRange { index: id, len: n });
            }
            member[(id - 1) as usize] = true;
        }
        Ok(FrontierCache {
            graph,
            member,
            memo: vec![None; n],
        })
    }

    fn reach(&mut self, root: LemmaId) -> Rc<Vec<LemmaId>> {
        let graph = self.graph;
        let mut stack = vec![root];
        while let Some(&top) = stack.last() {
            let i = (top - 1) as usize;
            if self.memo[i].is_some() {
                stack.pop();
                continue;
            }
            if self.member[i] {
                self.memo[i] = Some(Rc::new(vec![top]));
                stack.pop();
                continue;
            }
            let deps = graph.deps(top);
            let unresolved: Vec<LemmaId> = deps
                .iter()
                .copied()
                .filter(|&d| self.memo[(d - 1) as usize].is_none())
                .collect();
            if !unresolved.is_empty() {
                stack.extend(unresolved);
                continue;
            }
            let resolved: Vec<&Rc<Vec<LemmaId>>> = deps
                .iter()
                .map(|&d| self.memo[(d - 1) as usize].as_ref().unwrap())
                .collect();
            // A sole dependency's frontier is shared, not copied; chains of
            // unit-fanin nodes cost one Rc bump each.
            let set = match resolved.as_slice() {
                [] => Rc::new(Vec::new()),
                [only] => Rc::clone(only),
                many => {
                    let mut union = BTreeSet::new();
                    for part in many {
                        union.extend(part.iter().copied());
                    }
                    Rc::new(union.into_iter().collect())
                }
            };
            self.memo[i] = Some(set);
            stack.pop();
        }
        Rc::clone(self.memo[(root - 1) as usize].as_ref().unwrap())
    }

    /// Frontier of `id`'s dependencies: the nearest anchors strictly below
    /// `id` (whether or not `id` itself is an anchor).
    fn frontier_below(&mut self, id: LemmaId) -> Vec<LemmaId> {
        let graph = self.graph;
        let mut union = BTreeSet::new();
        for &dep in graph.deps(id) {
            union.extend(self.reach(dep).iter().copied());
        }
        union.into_iter().collect()
    }
}

/// Direct dependencies among a chosen member set: for each member, its
/// nearest-member ancestors in the underlying DAG.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedGraph {
    /// Member lemmas, ascending.
    pub members: Vec<LemmaId>,
    /// Parents per member, each list ascending and strictly below its key.
    pub parents: BTreeMap<LemmaId, Vec<LemmaId>>,
}

impl DerivedGraph {
    pub fn parents_of(&self, id: LemmaId) -> Option<&[LemmaId]> {
        self.parents.get(&id).map(Vec::as_slice)
    }
}

/// Builds the derived graph over `new_thms`: each member's parents are the
/// members reachable from it through non-member nodes only.
pub fn derive_new_graph(graph: &ProofGraph, new_thms: &BTreeSet<LemmaId>) -> Result<DerivedGraph> {
    let mut cache = FrontierCache::new(graph, new_thms)?;
    let mut parents = BTreeMap::new();
    for &t in new_thms {
        parents.insert(t, cache.frontier_below(t));
    }
    Ok(DerivedGraph {
        members: new_thms.iter().copied().collect(),
        parents,
    })
}

/// The nearest anchors strictly below one lemma — the single-source version
/// of [`derive_new_graph`].
pub fn closest_named_ancestors(
    graph: &ProofGraph,
    id: LemmaId,
    anchors: &BTreeSet<LemmaId>,
) -> Result<Vec<LemmaId>> {
    if id == 0 || id as usize > graph.len() {
        return Err(Error::IndexOutOfRange { index: id, len: graph.len() });
    }
    Ok(FrontierCache::new(graph, anchors)?.frontier_below(id))
}

/// How faithfully a premise problem reflects what was known at proof time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemMode {
    /// Premises are the derived-graph parents as-is, even lemmas first
    /// stated inside the conjecture's own proof.
    Cheating,
    /// Parents from the conjecture's own proof segment are replaced by
    /// their nearest originally-named ancestors.
    AlmostHonest,
}

/// One premise problem: prove `conjecture` from `premises`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub conjecture: LemmaId,
    /// Ascending, all strictly below the conjecture.
    pub premises: Vec<LemmaId>,
    pub mode: ProblemMode,
}

/// Problems for a whole theorem set, ascending by conjecture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemSet {
    pub problems: Vec<Problem>,
}

/// Replaces the directly-preceding premises of a conjecture by their
/// nearest `orig` ancestors, keeping the rest; the result is deduplicated
/// and ascending. `directly_preceding` decides which premises count as
/// stated inside the conjecture's own proof.
pub fn almost_honest_premises(
    graph: &ProofGraph,
    premises: &[LemmaId],
    orig: &BTreeSet<LemmaId>,
    directly_preceding: impl Fn(LemmaId) -> bool,
) -> Result<Vec<LemmaId>> {
    let mut cache = FrontierCache::new(graph, orig)?;
    let mut merged = BTreeSet::new();
    for &p in premises {
        if p == 0 || p as usize > graph.len() {
            return Err(Error::IndexOutOfRange { index: p, len: graph.len() });
        }
        if directly_preceding(p) {
            merged.extend(cache.frontier_below(p));
        } else {
            merged.insert(p);
        }
    }
    Ok(merged.into_iter().collect())
}

/// Builds premise problems for every theorem in `orig` from its derived
/// parents.
///
/// In almost-honest mode a premise counts as directly preceding for
/// conjecture `t` when its index lies in `t`'s proof segment — the interval
/// after the previous `orig` theorem up to `t` itself; such premises are
/// replaced via [`almost_honest_premises`].
pub fn emit_problems(
    graph: &ProofGraph,
    dg: &DerivedGraph,
    orig: &BTreeSet<LemmaId>,
    mode: ProblemMode,
) -> Result<ProblemSet> {
    let mut cache = FrontierCache::new(graph, orig)?;
    let mut problems = Vec::with_capacity(orig.len());
    let mut prev = 0 as LemmaId;
    for &t in orig {
        let parents = dg.parents_of(t).ok_or_else(|| {
            Error::InvalidParam(format!("theorem {t} is not a member of the derived graph"))
        })?;
        let premises = match mode {
            ProblemMode::Cheating => parents.to_vec(),
            ProblemMode::AlmostHonest => {
                let mut merged = BTreeSet::new();
                for &p in parents {
                    if p > prev {
                        merged.extend(cache.frontier_below(p));
                    } else {
                        merged.insert(p);
                    }
                }
                merged.into_iter().collect()
            }
        };
        problems.push(Problem {
            conjecture: t,
            premises,
            mode,
        });
        prev = t;
    }
    Ok(ProblemSet { problems })
}

/// Assigns each theorem its chain level: the earliest round an external
/// prover handled it. `provable` maps a lemma to the set of rounds it was
/// proved in; theorems absent from the map (or with no rounds) get `None`.
/// Pure bookkeeping — no proving happens here.
pub fn chain_closure(
    orig: &BTreeSet<LemmaId>,
    provable: &BTreeMap<LemmaId, BTreeSet<u32>>,
) -> BTreeMap<LemmaId, Option<u32>> {
    orig.iter()
        .map(|&t| {
            let level = provable
                .get(&t)
                .and_then(|rounds| rounds.iter().next().copied());
            (t, level)
        })
        .collect()
}

/// Replays history: for every `step`-th originally named theorem `j`, runs
/// greedy selection on the graph of proofs that preceded `j`, with only
/// the theorems named before `j` as the initial library. Yields
/// `(j, result)` in trace order; there is always at least one run when any
/// theorem is named.
pub fn fully_honest_schedule<'a>(
    graph: &'a ProofGraph,
    metric: MetricId,
    params: &'a MetricParams,
    step: usize,
    m: usize,
) -> Result<impl Iterator<Item = (LemmaId, SelectionResult)> + 'a> {
    params.validate()?;
    if step == 0 {
        return Err(Error::InvalidParam("step must be at least 1".into()));
    }
    let named_ids: Vec<LemmaId> = graph.ids().filter(|&id| graph.is_named(id)).collect();
    Ok(named_ids
        .into_iter()
        .step_by(step)
        .map(move |j| {
            let prefix = graph
                .prefix_subgraph(j)
                .expect("named theorems are in range");
            let named0: BTreeSet<LemmaId> =
                (1..j).filter(|&i| graph.is_named(i)).collect();
            let result = best_lemmas(&prefix, metric, params, &named0, m)
                .expect("params validated and named0 lies inside the prefix");
            (j, result)
        }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sidecar::NamedMap;
    use crate::trace::parse_trace;

    fn g5() -> ProofGraph {
        let trace = parse_trace("A3\nA3\nC5 1 2\nC7 3 1\nC9 4 3\n".as_bytes()).unwrap();
        let mut names = NamedMap::new();
        names.insert(5, "T".to_string());
        ProofGraph::build(trace, &names, "A".parse().unwrap()).unwrap()
    }

    fn set(ids: &[LemmaId]) -> BTreeSet<LemmaId> {
        ids.iter().copied().collect()
    }

    #[test]
    fn derived_parents_skip_non_members() {
        let g = g5();
        let dg = derive_new_graph(&g, &set(&[1, 2, 3, 5])).unwrap();
        assert_eq!(dg.parents_of(1).unwrap(), &[] as &[LemmaId]);
        assert_eq!(dg.parents_of(2).unwrap(), &[] as &[LemmaId]);
        assert_eq!(dg.parents_of(3).unwrap(), &[1, 2]);
        // Dep 4 is not a member: it expands through to {1, 3}.
        assert_eq!(dg.parents_of(5).unwrap(), &[1, 3]);
    }

    #[test]
    fn full_membership_reproduces_raw_deps() {
        let g = g5();
        let dg = derive_new_graph(&g, &set(&[1, 2, 3, 4, 5])).unwrap();
        for (id, node) in g.iter() {
            let mut deps: Vec<LemmaId> = node.deps.clone();
            deps.sort_unstable();
            assert_eq!(dg.parents_of(id).unwrap(), &deps[..]);
        }
    }

    #[test]
    fn lone_member_has_no_parents() {
        let g = g5();
        let dg = derive_new_graph(&g, &set(&[5])).unwrap();
        assert_eq!(dg.parents_of(5).unwrap(), &[] as &[LemmaId]);
    }

    #[test]
    fn ancestor_frontiers_match_hand_traversal() {
        let g = g5();
        assert_eq!(closest_named_ancestors(&g, 4, &set(&[5])).unwrap(), vec![]);
        assert_eq!(closest_named_ancestors(&g, 4, &set(&[3])).unwrap(), vec![3]);
        assert_eq!(closest_named_ancestors(&g, 4, &set(&[1, 2])).unwrap(), vec![1, 2]);
    }

    #[test]
    fn out_of_range_inputs_are_rejected() {
        let g = g5();
        assert!(derive_new_graph(&g, &set(&[9])).is_err());
        assert!(closest_named_ancestors(&g, 9, &set(&[1])).is_err());
    }

    #[test]
    fn cheating_problems_pass_parents_through() {
        let g = g5();
        let dg = derive_new_graph(&g, &set(&[1, 2, 3, 5])).unwrap();
        let ps = emit_problems(&g, &dg, &set(&[5]), ProblemMode::Cheating).unwrap();
        assert_eq!(ps.problems.len(), 1);
        assert_eq!(ps.problems[0].conjecture, 5);
        assert_eq!(ps.problems[0].premises, vec![1, 3]);
    }

    #[test]
    fn almost_honest_replaces_same_segment_premises() {
        // With orig = {5} the whole trace is theorem 5's proof segment, so
        // both parents get replaced by their orig-frontiers, which are
        // empty (everything bottoms out in non-member axioms).
        let g = g5();
        let dg = derive_new_graph(&g, &set(&[1, 2, 3, 5])).unwrap();
        let ps = emit_problems(&g, &dg, &set(&[5]), ProblemMode::AlmostHonest).unwrap();
        assert_eq!(ps.problems[0].premises, vec![]);
    }

    #[test]
    fn almost_honest_keeps_out_of_segment_premises() {
        // Two theorems: 4 ("T1") and 7 ("T2"). Lemma 5 sits in T2's
        // segment, lemma 3 in T1's. Parents of 7 = {3, 5}; only 5 is
        // directly preceding for 7 and collapses to its orig-frontier {4}.
        let trace = parse_trace("A3\nC5 1\nC7 2\nC9 3\nC11 4 3\nC13 5\nC15 6 3\n".as_bytes())
            .unwrap();
        let mut names = NamedMap::new();
        names.insert(4, "T1".to_string());
        names.insert(7, "T2".to_string());
        let g = ProofGraph::build(trace, &names, "A".parse().unwrap()).unwrap();
        let members = set(&[3, 4, 5, 7]);
        let dg = derive_new_graph(&g, &members).unwrap();
        assert_eq!(dg.parents_of(7).unwrap(), &[3, 5]);

        let orig = set(&[4, 7]);
        let ps = emit_problems(&g, &dg, &orig, ProblemMode::AlmostHonest).unwrap();
        assert_eq!(ps.problems[1].conjecture, 7);
        assert_eq!(ps.problems[1].premises, vec![3, 4]);
        // Cheating mode on the same inputs keeps 5.
        let ps = emit_problems(&g, &dg, &orig, ProblemMode::Cheating).unwrap();
        assert_eq!(ps.problems[1].premises, vec![3, 5]);
    }

    #[test]
    fn empty_orig_gives_no_problems() {
        let g = g5();
        let dg = derive_new_graph(&g, &set(&[1, 3, 5])).unwrap();
        let ps = emit_problems(&g, &dg, &set(&[]), ProblemMode::AlmostHonest).unwrap();
        assert!(ps.problems.is_empty());
    }

    #[test]
    fn non_member_conjecture_is_rejected() {
        let g = g5();
        let dg = derive_new_graph(&g, &set(&[1, 3])).unwrap();
        assert!(emit_problems(&g, &dg, &set(&[5]), ProblemMode::Cheating).is_err());
    }

    #[test]
    fn replacement_rule_with_injected_predicate() {
        // Treating only premise 3 as directly preceding keeps premise 1
        // and dissolves 3 into its (empty) orig-frontier.
        let g = g5();
        let got = almost_honest_premises(&g, &[1, 3], &set(&[5]), |p| p == 3).unwrap();
        assert_eq!(got, vec![1]);
    }

    #[test]
    fn chain_levels_take_the_earliest_round() {
        let orig = set(&[4, 7, 9]);
        let mut provable = BTreeMap::new();
        provable.insert(4, BTreeSet::from([0u32, 2]));
        provable.insert(7, BTreeSet::from([2]));
        let levels = chain_closure(&orig, &provable);
        assert_eq!(levels[&4], Some(0));
        assert_eq!(levels[&7], Some(2));
        assert_eq!(levels[&9], None);
        // Monotonicity: the level <= k population only grows with k.
        let at = |k: u32| levels.values().filter(|l| matches!(l, Some(v) if *v <= k)).count();
        assert!(at(0) <= at(1) && at(1) <= at(2));
    }

    #[test]
    fn honest_schedule_visits_every_stepth_theorem() {
        let trace = parse_trace("A3\nC5 1\nC7 2\nC9 3\nC11 4 3\n".as_bytes()).unwrap();
        let mut names = NamedMap::new();
        names.insert(3, "T1".to_string());
        names.insert(5, "T2".to_string());
        let g = ProofGraph::build(trace, &names, "A".parse().unwrap()).unwrap();
        let params = MetricParams::default();

        let runs: Vec<_> = fully_honest_schedule(&g, MetricId::Q1, &params, 1, 1)
            .unwrap()
            .collect();
        assert_eq!(runs.len(), 2);
        assert_eq!(runs[0].0, 3);
        assert_eq!(runs[1].0, 5);
        // The first run sees only lemmas 1..2 and no prior names, so the
        // sole eligible pick is lemma 2 at the all-zero tie-break.
        assert_eq!(runs[0].1.chosen[0], (2, 0.0));
        // The second run starts from the library {3}.
        assert!(runs[1].1.named_final.contains(&3));

        let sparse: Vec<_> = fully_honest_schedule(&g, MetricId::Q1, &params, 10, 1)
            .unwrap()
            .collect();
        assert_eq!(sparse.len(), 1);
        assert_eq!(sparse[0].0, 3);
    }

    #[test]
    fn honest_schedule_rejects_zero_step() {
        let g = g5();
        assert!(fully_honest_schedule(&g, MetricId::Q1, &MetricParams::default(), 0, 1).is_err());
    }
}
