//! Lemma-quality metrics.
//!
//! Three families share one [`MetricId`] namespace: the usage/dependency
//! family Q1, Q1^r, Q2, Q3; the usage-free family EQ1, EQ2; and the PageRank
//! family PR1–PR5. [`compute_metric`] is the one-call entry point; the
//! building blocks in [`base`] and [`pagerank`] are public for callers that
//! want to reuse tallies (selection recomputes them every round).

pub mod base;
pub mod pagerank;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::ProofGraph;
use crate::num::Real;
use crate::{LemmaId, Score};
pub use pagerank::Direction;

/// Identifies one scoring function. The `Q1R` exponent is part of the id, so
/// `q1r:0.5` and `q1r:1.5` are distinct metrics with distinct reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricId {
    Q1,
    /// `Q1^r` with exponent `r` in `[0, 2]`.
    Q1R(f64),
    Q2,
    Q3,
    Eq1,
    Eq2,
    Pr1,
    Pr2,
    Pr3,
    Pr4,
    Pr5,
}

impl MetricId {
    pub const ALL_FIXED: [MetricId; 10] = [
        MetricId::Q1,
        MetricId::Q2,
        MetricId::Q3,
        MetricId::Eq1,
        MetricId::Eq2,
        MetricId::Pr1,
        MetricId::Pr2,
        MetricId::Pr3,
        MetricId::Pr4,
        MetricId::Pr5,
    ];

    /// Whether the score depends on the Named set. PageRank metrics do not,
    /// so greedy selection never needs to recompute them.
    pub fn depends_on_named(self) -> bool {
        !matches!(
            self,
            MetricId::Pr1 | MetricId::Pr2 | MetricId::Pr3 | MetricId::Pr4 | MetricId::Pr5
        )
    }

    /// Whether computing the score requires the use tally U.
    pub fn needs_uses(self) -> bool {
        matches!(
            self,
            MetricId::Q1 | MetricId::Q1R(_) | MetricId::Q2 | MetricId::Q3
        )
    }

    /// Whether computing the score requires the chain-length tally L.
    pub fn needs_chains(self) -> bool {
        matches!(self, MetricId::Eq2)
    }
}

impl FromStr for MetricId {
    type Err = Error;

    fn from_str(s: &str) -> Result<MetricId> {
        if let Some(r) = s.strip_prefix("q1r:") {
            let r: f64 = r
                .parse()
                .map_err(|_| Error::UnknownMetric(s.to_string()))?;
            if !(0.0..=2.0).contains(&r) {
                return Err(Error::InvalidParam(format!(
                    "q1r exponent must lie in [0, 2], got {r}"
                )));
            }
            return Ok(MetricId::Q1R(r));
        }
        match s {
            "q1" => Ok(MetricId::Q1),
            "q2" => Ok(MetricId::Q2),
            "q3" => Ok(MetricId::Q3),
            "eq1" => Ok(MetricId::Eq1),
            "eq2" => Ok(MetricId::Eq2),
            "pr1" => Ok(MetricId::Pr1),
            "pr2" => Ok(MetricId::Pr2),
            "pr3" => Ok(MetricId::Pr3),
            "pr4" => Ok(MetricId::Pr4),
            "pr5" => Ok(MetricId::Pr5),
            _ => Err(Error::UnknownMetric(s.to_string())),
        }
    }
}

impl fmt::Display for MetricId {
    // Inverse of `FromStr`: prints the CLI spelling.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricId::Q1 => write!(f, "q1"),
            MetricId::Q1R(r) => write!(f, "q1r:{r}"),
            MetricId::Q2 => write!(f, "q2"),
            MetricId::Q3 => write!(f, "q3"),
            MetricId::Eq1 => write!(f, "eq1"),
            MetricId::Eq2 => write!(f, "eq2"),
            MetricId::Pr1 => write!(f, "pr1"),
            MetricId::Pr2 => write!(f, "pr2"),
            MetricId::Pr3 => write!(f, "pr3"),
            MetricId::Pr4 => write!(f, "pr4"),
            MetricId::Pr5 => write!(f, "pr5"),
        }
    }
}

/// Tunables shared by every metric computation.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricParams {
    /// PageRank damping factor `f`, strictly between 0 and 1.
    pub damping: f64,
    /// PageRank stops when one iteration's L1 change falls below this.
    pub pr_tolerance: f64,
    /// Upper bound on PageRank power iterations.
    pub pr_max_iters: u32,
}

impl Default for MetricParams {
    fn default() -> Self {
        MetricParams {
            damping: 0.85,
            pr_tolerance: 1e-12,
            pr_max_iters: 200,
        }
    }
}

impl MetricParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(Error::InvalidParam(format!(
                "damping must lie strictly between 0 and 1, got {}",
                self.damping
            )));
        }
        if !(self.pr_tolerance > 0.0) {
            return Err(Error::InvalidParam(format!(
                "tolerance must be positive, got {}",
                self.pr_tolerance
            )));
        }
        Ok(())
    }
}

/// Per-lemma scores for one metric; `values[i - 1]` belongs to lemma `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    pub metric: MetricId,
    pub values: Vec<Score>,
}

impl ScoreVector {
    pub fn score(&self, id: LemmaId) -> Score {
        self.values[(id - 1) as usize]
    }

    /// All lemmas ordered by descending score, ties by ascending index.
    /// Infinite scores sort above every finite one.
    pub fn ranking(&self) -> Vec<(LemmaId, Score)> {
        let mut order: Vec<(LemmaId, Score)> = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| ((i + 1) as LemmaId, v))
            .collect();
        order.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        order
    }
}

/// Computes one metric against an explicit Named flag vector (index `i - 1`
/// for lemma `i`), which may differ from the graph's own names during greedy
/// selection. PageRank metrics ignore the flags.
pub fn scores_with_named<R: Real + Send + Sync>(
    graph: &ProofGraph,
    named: &[bool],
    metric: MetricId,
    params: &MetricParams,
) -> Result<Vec<R>> {
    let tallies = || {
        (
            base::dependency_counts::<R>(graph, named),
            base::use_counts::<R>(graph, named),
        )
    };
    Ok(match metric {
        MetricId::Q1 => {
            let (d, u) = tallies();
            base::q1(graph, &d, &u)
        }
        MetricId::Q1R(r) => {
            let (d, u) = tallies();
            base::q1r(graph, &d, &u, R::from_f64(r).unwrap())
        }
        MetricId::Q2 => {
            let (d, u) = tallies();
            base::q2(graph, &d, &u)
        }
        MetricId::Q3 => {
            let (d, u) = tallies();
            base::q3(graph, &d, &u)
        }
        MetricId::Eq1 => base::eq1(graph, &base::dependency_counts::<R>(graph, named)),
        MetricId::Eq2 => base::eq2(graph, &base::chain_lengths::<R>(graph, named)),
        MetricId::Pr1 => pagerank::pagerank(graph, params, Direction::Forward)?,
        MetricId::Pr3 => pagerank::pagerank(graph, params, Direction::Reverse)?,
        MetricId::Pr2 | MetricId::Pr4 => {
            let direction = if metric == MetricId::Pr2 {
                Direction::Forward
            } else {
                Direction::Reverse
            };
            let pr: Vec<R> = pagerank::pagerank(graph, params, direction)?;
            graph
                .iter()
                .map(|(id, node)| pr[(id - 1) as usize] / R::from_u32(node.size).unwrap())
                .collect()
        }
        MetricId::Pr5 => {
            let fwd: Vec<R> = pagerank::pagerank(graph, params, Direction::Forward)?;
            let rev: Vec<R> = pagerank::pagerank(graph, params, Direction::Reverse)?;
            graph
                .iter()
                .map(|(id, node)| {
                    let i = (id - 1) as usize;
                    (fwd[i] + rev[i]) / R::from_u32(node.size).unwrap()
                })
                .collect()
        }
    })
}

/// Computes one metric against the graph's own Named set.
pub fn compute_metric(
    graph: &ProofGraph,
    metric: MetricId,
    params: &MetricParams,
) -> Result<ScoreVector> {
    let values = scores_with_named::<Score>(graph, graph.named_flags(), metric, params)?;
    Ok(ScoreVector { metric, values })
}
