//! Alpha-variant merging.
//!
//! Proof recorders emit many lemmas that differ only in bound/free variable
//! naming. Given a map from lemma index to a variable-normalized statement
//! string, [`merge_alpha_variants`] rewrites every dependency to point at the
//! earliest lemma with the same normal form. Variant nodes and their proofs
//! stay in the trace — their tallies still matter — but nothing references
//! them anymore; [`prune_variants`] optionally drops them and renumbers.

use std::collections::HashMap;

use crate::sidecar::{NamedMap, NormalFormMap};
use crate::trace::{LemmaNode, ProofTrace};
use crate::LemmaId;

/// `canon[i - 1]` is the earliest lemma index sharing lemma `i`'s normal
/// form; lemmas without a normal-form entry are their own class.
fn canonical_map(trace: &ProofTrace, nf: &NormalFormMap) -> Vec<LemmaId> {
    let mut first_seen: HashMap<&str, LemmaId> = HashMap::new();
    let mut canon = Vec::with_capacity(trace.len());
    for id in 1..=trace.len() as LemmaId {
        match nf.get(&id) {
            Some(form) => canon.push(*first_seen.entry(form).or_insert(id)),
            None => canon.push(id),
        }
    }
    canon
}

/// Rewrites every dependency to the earliest lemma with the same normal
/// form, then re-deduplicates each dependency list (keeping first-occurrence
/// order). Node count and order are unchanged; edges only move downward, so
/// the result is still a valid trace.
pub fn merge_alpha_variants(trace: &ProofTrace, nf: &NormalFormMap) -> ProofTrace {
    let canon = canonical_map(trace, nf);
    let nodes = trace
        .nodes()
        .iter()
        .map(|node| {
            let mut deps: Vec<LemmaId> = Vec::with_capacity(node.deps.len());
            for &dep in &node.deps {
                let c = canon[(dep - 1) as usize];
                if !deps.contains(&c) {
                    deps.push(c);
                }
            }
            LemmaNode::new(node.kind, node.size, deps)
        })
        .collect();
    ProofTrace::from_nodes(nodes).expect("canonical index never exceeds the original")
}

/// Merges alpha-variants and then drops the variant nodes themselves:
/// unnamed lemmas that are not the canonical representative of their class.
/// After merging nothing references them, so no retained edge is cut.
///
/// Returns the renumbered trace and, per original index, the new index of
/// each retained node (`None` for dropped ones); feed the latter to
/// [`remap_names`] to carry a names file across.
pub fn prune_variants(
    trace: &ProofTrace,
    nf: &NormalFormMap,
    names: &NamedMap,
) -> (ProofTrace, Vec<Option<LemmaId>>) {
    let merged = merge_alpha_variants(trace, nf);
    let canon = canonical_map(&merged, nf);

    let mut remap: Vec<Option<LemmaId>> = Vec::with_capacity(merged.len());
    let mut next = 1 as LemmaId;
    for (id, _) in merged.iter() {
        let keep = canon[(id - 1) as usize] == id || names.contains_key(&id);
        remap.push(keep.then(|| {
            let new = next;
            next += 1;
            new
        }));
    }

    let nodes = merged
        .iter()
        .filter(|(id, _)| remap[(*id - 1) as usize].is_some())
        .map(|(_, node)| {
            let deps = node
                .deps
                .iter()
                .map(|&d| remap[(d - 1) as usize].expect("canonical deps are retained"))
                .collect();
            LemmaNode::new(node.kind, node.size, deps)
        })
        .collect();
    let pruned = ProofTrace::from_nodes(nodes).expect("renumbering preserves edge direction");
    (pruned, remap)
}

/// Carries a names file across a prune: keys are rewritten through `remap`.
pub fn remap_names(names: &NamedMap, remap: &[Option<LemmaId>]) -> NamedMap {
    names
        .iter()
        .filter_map(|(&old, name)| {
            remap
                .get((old - 1) as usize)
                .copied()
                .flatten()
                .map(|new| (new, name.clone()))
        })
        .collect()
}
