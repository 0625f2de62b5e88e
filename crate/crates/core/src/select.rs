//! Greedy best-lemma selection.
//!
//! One round names the highest-scoring unnamed, non-axiom lemma; the next
//! round re-tallies D and U (and L when the metric wants it) against the
//! grown Named set and repeats. PageRank metrics never look at the Named
//! set, so for them the whole run collapses to a single sort.
//!
//! [`best_lemmas`] runs the loop to completion; [`select_schedule`] exposes
//! it as an iterator of snapshots for checkpointing long runs.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::ProofGraph;
use crate::metrics::{scores_with_named, MetricId, MetricParams};
use crate::{LemmaId, Score};

/// Outcome of a selection run (or an intermediate snapshot of one).
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult {
    /// Selected lemmas in selection order, each with its score at the round
    /// it was picked.
    pub chosen: Vec<(LemmaId, Score)>,
    /// The grown Named set: the initial names plus everything chosen,
    /// ascending.
    pub named_final: Vec<LemmaId>,
}

/// Iterator over selection snapshots; see [`select_schedule`].
pub struct SelectionSchedule<'a> {
    graph: &'a ProofGraph,
    metric: MetricId,
    params: MetricParams,
    /// Current Named flags: the initial set plus all selections so far.
    named: Vec<bool>,
    /// Still selectable: unnamed, non-axiom, not yet chosen.
    eligible: Vec<bool>,
    chosen: Vec<(LemmaId, Score)>,
    remaining: usize,
    emit_every: usize,
    /// Precomputed ranking for Named-independent metrics.
    presorted: Option<std::vec::IntoIter<(LemmaId, Score)>>,
    done: bool,
}

impl<'a> SelectionSchedule<'a> {
    fn new(
        graph: &'a ProofGraph,
        metric: MetricId,
        params: &MetricParams,
        named0: &BTreeSet<LemmaId>,
        m: usize,
        emit_every: usize,
    ) -> Result<Self> {
        params.validate()?;
        if emit_every == 0 {
            return Err(Error::InvalidParam("emit_every must be at least 1".into()));
        }
        let n = graph.len();
        let mut named = vec![false; n];
        for &id in named0 {
            if id == 0 || id as usize > n {
                return Err(Error::IndexOutOfRange { index: id, len: n });
            }
            named[(id - 1) as usize] = true;
        }
        let eligible: Vec<bool> = graph
            .ids()
            .map(|id| !graph.is_axiom(id) && !named[(id - 1) as usize])
            .collect();
        let eligible_count = eligible.iter().filter(|&&e| e).count();
        let remaining = if m > eligible_count {
            log::warn!("requested {m} lemmas but only {eligible_count} are eligible");
            eligible_count
        } else {
            m
        };

        let presorted = if metric.depends_on_named() || remaining == 0 {
            None
        } else {
            let scores: Vec<Score> = scores_with_named(graph, &named, metric, params)?;
            let mut order: Vec<(LemmaId, Score)> = scores
                .iter()
                .enumerate()
                .filter(|&(i, _)| eligible[i])
                .map(|(i, &s)| ((i + 1) as LemmaId, s))
                .collect();
            order.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
            order.truncate(remaining);
            Some(order.into_iter())
        };

        Ok(SelectionSchedule {
            graph,
            metric,
            params: params.clone(),
            named,
            eligible,
            chosen: Vec::new(),
            remaining,
            emit_every,
            presorted,
            done: false,
        })
    }

    fn select_one(&mut self) {
        let (id, score) = match &mut self.presorted {
            Some(order) => order.next().expect("presorted list covers every round"),
            None => {
                let scores: Vec<Score> =
                    scores_with_named(self.graph, &self.named, self.metric, &self.params)
                        .expect("named-dependent metrics cannot fail");
                let mut best: Option<(LemmaId, Score)> = None;
                for (i, &score) in scores.iter().enumerate() {
                    if !self.eligible[i] {
                        continue;
                    }
                    // Strict comparison keeps the lowest index on ties.
                    if best.map_or(true, |(_, b)| score.total_cmp(&b).is_gt()) {
                        best = Some(((i + 1) as LemmaId, score));
                    }
                }
                best.expect("remaining > 0 implies an eligible lemma exists")
            }
        };
        let i = (id - 1) as usize;
        self.named[i] = true;
        self.eligible[i] = false;
        self.chosen.push((id, score));
    }

    fn snapshot(&self) -> SelectionResult {
        let named_final = self
            .named
            .iter()
            .enumerate()
            .filter(|&(_, &f)| f)
            .map(|(i, _)| (i + 1) as LemmaId)
            .collect();
        SelectionResult {
            chosen: self.chosen.clone(),
            named_final,
        }
    }
}

impl Iterator for SelectionSchedule<'_> {
    type Item = SelectionResult;

    fn next(&mut self) -> Option<SelectionResult> {
        if self.done {
            return None;
        }
        if self.remaining == 0 {
            // Zero rounds requested (or nothing eligible): one snapshot of
            // the unchanged state.
            self.done = true;
            return Some(self.snapshot());
        }
        let batch = self.emit_every.min(self.remaining);
        for _ in 0..batch {
            self.select_one();
        }
        self.remaining -= batch;
        if self.remaining == 0 {
            self.done = true;
        }
        Some(self.snapshot())
    }
}

/// Streams snapshots of a greedy run, one after every `emit_every`
/// selections; the last snapshot is the full [`best_lemmas`] result.
///
/// `named0` is the authoritative initial Named set — the graph's own name
/// flags are ignored, so callers can select from scratch or from any
/// hypothetical library.
pub fn select_schedule<'a>(
    graph: &'a ProofGraph,
    metric: MetricId,
    params: &MetricParams,
    named0: &BTreeSet<LemmaId>,
    m: usize,
    emit_every: usize,
) -> Result<SelectionSchedule<'a>> {
    SelectionSchedule::new(graph, metric, params, named0, m, emit_every)
}

/// Picks the `m` best lemmas by greedy re-scoring (ties broken by lowest
/// index). Axioms and members of `named0` are never picked; if fewer than
/// `m` lemmas are eligible, all of them are returned with a warning.
pub fn best_lemmas(
    graph: &ProofGraph,
    metric: MetricId,
    params: &MetricParams,
    named0: &BTreeSet<LemmaId>,
    m: usize,
) -> Result<SelectionResult> {
    let schedule = select_schedule(graph, metric, params, named0, m, m.max(1))?;
    Ok(schedule.last().expect("schedule emits at least one snapshot"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::base::{dependency_counts, use_counts};
    use crate::metrics::compute_metric;
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

    fn run(
        graph: &ProofGraph,
        metric: MetricId,
        named0: &[LemmaId],
        m: usize,
    ) -> SelectionResult {
        best_lemmas(graph, metric, &MetricParams::default(), &set(named0), m).unwrap()
    }

    #[test]
    fn picks_the_top_scoring_non_axiom() {
        // Q1 over G5 with Named = {5} is [1.0, 2/3, 0.8, 3/7, 1/9]; axioms
        // 1 and 2 are barred, so node 3 wins.
        let g = g5();
        let r = run(&g, MetricId::Q1, &[5], 1);
        assert_eq!(r.chosen.len(), 1);
        assert_eq!(r.chosen[0].0, 3);
        assert!((r.chosen[0].1 - 0.8).abs() < 1e-12);
        assert_eq!(r.named_final, vec![3, 5]);
    }

    #[test]
    fn zero_rounds_is_a_no_op() {
        let g = g5();
        let r = run(&g, MetricId::Q1, &[5], 0);
        assert!(r.chosen.is_empty());
        assert_eq!(r.named_final, vec![5]);
    }

    #[test]
    fn from_scratch_breaks_the_all_zero_tie_by_index() {
        // With no named sinks every U is 0, so every Q1 score is 0; the
        // lowest-index eligible lemma (3 — axioms are barred) is taken.
        let g = g5();
        let r = run(&g, MetricId::Q1, &[], 1);
        assert_eq!(r.chosen[0], (3, 0.0));
    }

    #[test]
    fn axioms_and_initial_names_are_never_chosen() {
        let g = g5();
        let r = run(&g, MetricId::Q1, &[5], 10);
        let ids: Vec<LemmaId> = r.chosen.iter().map(|&(id, _)| id).collect();
        assert!(!ids.contains(&1) && !ids.contains(&2) && !ids.contains(&5));
        // Only 3 and 4 are eligible; the over-ask warns and returns both.
        assert_eq!(ids.len(), 2);
        assert_eq!(r.named_final, vec![3, 4, 5]);
    }

    #[test]
    fn greedy_runs_are_prefix_monotone() {
        let g = g5();
        for metric in [MetricId::Q1, MetricId::Q2, MetricId::Eq2] {
            let two = run(&g, metric, &[5], 2).chosen;
            let one = run(&g, metric, &[5], 1).chosen;
            assert_eq!(&two[..1], &one[..]);
        }
    }

    #[test]
    fn rescoring_uses_the_grown_named_set() {
        // Round 1 picks 3 (0.8). Round 2 re-tallies with {3, 5} named:
        // D = [1,1,1,2,1], U = [3,2,1,1,1], so Q1(4) = 2/7.
        let g = g5();
        let r = run(&g, MetricId::Q1, &[5], 2);
        assert_eq!(r.chosen[1].0, 4);
        assert!((r.chosen[1].1 - 2.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn chosen_lemmas_retally_to_one() {
        let g = g5();
        let r = run(&g, MetricId::Q1, &[5], 2);
        let mut named = vec![false; g.len()];
        for &id in &r.named_final {
            named[(id - 1) as usize] = true;
        }
        let d: Vec<f64> = dependency_counts(&g, &named);
        let u: Vec<f64> = use_counts(&g, &named);
        for &(id, _) in &r.chosen {
            assert_eq!(d[(id - 1) as usize], 1.0);
            assert_eq!(u[(id - 1) as usize], 1.0);
        }
    }

    #[test]
    fn pagerank_metrics_reduce_to_one_sort() {
        let g = g5();
        let sv = compute_metric(&g, MetricId::Pr2, &MetricParams::default()).unwrap();
        let expected: Vec<(LemmaId, Score)> = sv
            .ranking()
            .into_iter()
            .filter(|&(id, _)| !g.is_axiom(id) && id != 5)
            .take(2)
            .collect();
        let r = run(&g, MetricId::Pr2, &[5], 2);
        assert_eq!(r.chosen, expected);
    }

    #[test]
    fn schedule_emits_requested_snapshots() {
        let g = g5();
        let params = MetricParams::default();
        let every_one: Vec<_> = select_schedule(&g, MetricId::Q1, &params, &set(&[5]), 2, 1)
            .unwrap()
            .collect();
        assert_eq!(every_one.len(), 2);
        assert_eq!(every_one[0].chosen.len(), 1);
        assert_eq!(&every_one[1].chosen[..1], &every_one[0].chosen[..]);

        let chunked: Vec<_> = select_schedule(&g, MetricId::Q1, &params, &set(&[]), 3, 2)
            .unwrap()
            .collect();
        assert_eq!(chunked.len(), 2);
        assert_eq!(chunked[0].chosen.len(), 2);
        assert_eq!(chunked[1].chosen.len(), 3);

        let single: Vec<_> = select_schedule(&g, MetricId::Q1, &params, &set(&[5]), 2, 2)
            .unwrap()
            .collect();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0], *every_one.last().unwrap());
    }

    #[test]
    fn schedule_final_snapshot_matches_best_lemmas() {
        let g = g5();
        let params = MetricParams::default();
        let last = select_schedule(&g, MetricId::Eq1, &params, &set(&[5]), 2, 1)
            .unwrap()
            .last()
            .unwrap();
        assert_eq!(last, best_lemmas(&g, MetricId::Eq1, &params, &set(&[5]), 2).unwrap());
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = g5();
        let params = MetricParams::default();
        assert!(matches!(
            best_lemmas(&g, MetricId::Q1, &params, &set(&[99]), 1),
            Err(Error::IndexOutOfRange { index: 99, .. })
        ));
        assert!(select_schedule(&g, MetricId::Q1, &params, &set(&[]), 1, 0).is_err());
    }
}
