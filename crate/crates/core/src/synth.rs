//! Deterministic synthetic traces for benchmarks and property tests.
//!
//! Everything is seeded ChaCha, so a given seed reproduces the same trace on
//! every platform and thread count.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::sidecar::{NamedMap, NormalFormMap};
use crate::trace::{LemmaNode, ProofTrace};
use crate::LemmaId;

/// A random DAG trace: roughly 15% dependency-free axioms (tag `A`), a few
/// dependency-free non-axioms (tag `F`), and derived nodes (tag `C`) citing
/// up to `max_deps` distinct earlier lemmas. Sizes are uniform in
/// `1..=max_size`.
pub fn random_trace(seed: u64, nodes: usize, max_deps: usize, max_size: u32) -> ProofTrace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(nodes);
    for i in 0..nodes {
        let size = rng.gen_range(1..=max_size.max(1));
        let roll: u32 = rng.gen_range(0..100);
        let node = if i == 0 || roll < 15 {
            LemmaNode::new(b'A', size, vec![])
        } else if roll < 25 {
            LemmaNode::new(b'F', size, vec![])
        } else {
            let k = rng.gen_range(0..=max_deps.min(i));
            let deps = rand::seq::index::sample(&mut rng, i, k)
                .into_iter()
                .map(|d| (d + 1) as LemmaId)
                .collect();
            LemmaNode::new(b'C', size, deps)
        };
        out.push(node);
    }
    ProofTrace::from_nodes(out).expect("sampled deps are always earlier")
}

/// Randomly names about `fraction` of the lemmas `THM_<index>`.
pub fn random_named(seed: u64, len: usize, fraction: f64) -> NamedMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (1..=len as LemmaId)
        .filter(|_| rng.gen_bool(fraction.clamp(0.0, 1.0)))
        .map(|i| (i, format!("THM_{i}")))
        .collect()
}

/// Assigns about half the lemmas a normal form drawn from `classes` distinct
/// strings, injecting alpha-duplicate groups; the rest stay unmapped.
pub fn random_alpha_classes(seed: u64, len: usize, classes: usize) -> NormalFormMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut map = NormalFormMap::new();
    for i in 1..=len as LemmaId {
        if rng.gen_bool(0.5) {
            map.insert(i, format!("!x. form_{}", rng.gen_range(0..classes.max(1))));
        }
    }
    map
}

/// A geometric-growth ladder: one axiom, then `rungs - 1` nodes each citing
/// their predecessor `multiplicity` times, so the dependency count of rung
/// `k` is `multiplicity^(k-1)`. Exercises counting far beyond both u64 and
/// f64 range.
pub fn doubling_ladder(rungs: usize, multiplicity: usize) -> ProofTrace {
    assert!(rungs >= 1 && multiplicity >= 1);
    let mut nodes = vec![LemmaNode::new(b'A', 3, vec![])];
    for prev in 1..rungs as LemmaId {
        nodes.push(LemmaNode::new(b'C', 5, vec![prev; multiplicity]));
    }
    ProofTrace::from_nodes(nodes).expect("ladder edges point at predecessors")
}
