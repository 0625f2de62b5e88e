//! Mining useful lemmas from kernel-level proof traces.
//!
//! An LCF-style proof kernel can log every inference it performs; the log is
//! a huge DAG in which a handful of human-named theorems sit on top of
//! millions of anonymous intermediate lemmas. This crate parses such traces,
//! builds the inference DAG, scores every lemma with a family of quality
//! metrics (usage/dependency ratios and PageRank variants), greedily selects
//! the best lemmas to add to a library, and emits the derived dependency
//! graphs and premise problems used to evaluate such selections.
//!
//! ```
//! use lemma_forge::{compute_metric, parse_trace, MetricId, MetricParams, ProofGraph};
//!
//! let trace = parse_trace("A3\nA3\nC5 1 2\nC7 3 1\nC9 4 3\n".as_bytes())?;
//! let names = [(5, "T".to_string())].into_iter().collect();
//! let graph = ProofGraph::build(trace, &names, "A".parse()?)?;
//! let q1 = compute_metric(&graph, MetricId::Q1, &MetricParams::default())?;
//! assert_eq!(q1.ranking()[0].0, 1);
//! # Ok::<(), lemma_forge::Error>(())
//! ```
//!
//! Counting passes are generic over the scalar: `f64` saturates to infinity
//! on Flyspeck-sized traces while preserving order, and `BigUint` gives
//! exact values when needed. The [`num`] module defines the two small
//! traits involved.

pub mod error;
pub mod export;
pub mod graph;
pub mod metrics;
pub mod normalize;
pub mod num;
pub mod scenarios;
pub mod select;
pub mod sidecar;
pub mod synth;
pub mod trace;

/// 1-based index of a lemma in its trace.
pub type LemmaId = u32;

/// Production scalar for counts and scores: saturates to `+inf` instead of
/// wrapping.
pub type Score = f64;

/// Exact counting scalar for oracle-grade arithmetic.
pub type ExactCount = num_bigint::BigUint;

pub use error::{Error, Result};
pub use export::{export_ranking, fmt_sig};
pub use graph::{GraphStats, ProofGraph, TagSet};
pub use metrics::{compute_metric, scores_with_named, MetricId, MetricParams, ScoreVector};
pub use normalize::{merge_alpha_variants, prune_variants, remap_names};
pub use scenarios::{
    chain_closure, closest_named_ancestors, derive_new_graph, emit_problems,
    fully_honest_schedule, DerivedGraph, ProblemMode, ProblemSet,
};
pub use select::{best_lemmas, select_schedule, SelectionResult};
pub use sidecar::{read_names, read_normal_forms, write_names, NamedMap, NormalFormMap};
pub use trace::{parse_trace, write_trace, LemmaNode, ProofTrace, TraceReader};
