//! Plain-text exporters: rankings, edge lists, premise problems, corpus
//! statistics. Everything is LF-terminated, tab- or space-separated, and
//! deterministic, so diffing two runs is meaningful.

use std::collections::BTreeMap;
use std::io::Write;

use crate::error::Result;
use crate::graph::GraphStats;
use crate::metrics::ScoreVector;
use crate::scenarios::{DerivedGraph, ProblemSet};
use crate::sidecar::NamedMap;
use crate::{LemmaId, Score};

/// Formats a score with 12 significant digits.
///
/// Zero and small-magnitude values print positionally (`1.00000000000`,
/// `0.800000000000`); magnitudes of 1e12 and beyond switch to scientific
/// notation, and infinities print as `inf`.
pub fn fmt_sig(x: Score) -> String {
    if x == 0.0 {
        return format!("{x:.11}");
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    // Take the decimal exponent from the rounded scientific form so values
    // that round up across a power of ten still get exactly 12 digits.
    let sci = format!("{x:.11e}");
    let exp: i32 = sci[sci.rfind('e').unwrap() + 1..].parse().unwrap();
    if exp >= 12 {
        sci
    } else {
        format!("{x:.*}", (11 - exp) as usize)
    }
}

/// Writes `RANK<TAB>INDEX<TAB>SCORE<TAB>NAME` lines (a dash when unnamed)
/// for pre-ranked `(index, score)` pairs, ranks starting at 1.
pub fn write_ranked_pairs<W: Write>(
    pairs: &[(LemmaId, Score)],
    names: &NamedMap,
    mut out: W,
) -> Result<()> {
    for (rank, &(id, score)) in pairs.iter().enumerate() {
        let name = names.get(&id).map(String::as_str).unwrap_or("-");
        writeln!(out, "{}\t{}\t{}\t{}", rank + 1, id, fmt_sig(score), name)?;
    }
    Ok(())
}

/// Writes the top `k` lemmas of a score vector as a ranking TSV.
pub fn export_ranking<W: Write>(
    scores: &ScoreVector,
    names: &NamedMap,
    k: usize,
    out: W,
) -> Result<()> {
    let mut ranking = scores.ranking();
    ranking.truncate(k);
    write_ranked_pairs(&ranking, names, out)
}

/// Writes one `I J` line per derived-graph edge, `J` being a parent of `I`;
/// members ascending, parents ascending within each member.
pub fn write_edge_list<W: Write>(dg: &DerivedGraph, mut out: W) -> Result<()> {
    for (&t, parents) in &dg.parents {
        for &p in parents {
            writeln!(out, "{t} {p}")?;
        }
    }
    Ok(())
}

/// Writes `INDEX: P1 P2 ...` lines for every member in trace order — the
/// chronological dataset for an external premise-selection learner.
pub fn write_chrono<W: Write>(dg: &DerivedGraph, mut out: W) -> Result<()> {
    for (&t, parents) in &dg.parents {
        write!(out, "{t}:")?;
        for &p in parents {
            write!(out, " {p}")?;
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Writes one `CONJ_INDEX: P1 P2 ...` line per problem.
pub fn write_problems<W: Write>(ps: &ProblemSet, mut out: W) -> Result<()> {
    for problem in &ps.problems {
        write!(out, "{}:", problem.conjecture)?;
        for &p in &problem.premises {
            write!(out, " {p}")?;
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Writes `INDEX<TAB>LEVEL` lines; lemmas that were never proved carry no
/// level and are omitted.
pub fn write_chain_levels<W: Write>(
    levels: &BTreeMap<LemmaId, Option<u32>>,
    mut out: W,
) -> Result<()> {
    for (&id, level) in levels {
        if let Some(level) = level {
            writeln!(out, "{id}\t{level}")?;
        }
    }
    Ok(())
}

/// Writes `key<TAB>value` statistic lines.
pub fn write_stats<W: Write>(stats: &GraphStats, mut out: W) -> Result<()> {
    writeln!(out, "nodes\t{}", stats.nodes)?;
    writeln!(out, "edges\t{}", stats.edges)?;
    writeln!(out, "named\t{}", stats.named)?;
    writeln!(out, "axioms\t{}", stats.axioms)?;
    writeln!(out, "zero_dep_non_axiom\t{}", stats.zero_dep_non_axiom)?;
    if let Some(distinct) = stats.distinct_normal_forms {
        writeln!(out, "distinct_normal_forms\t{distinct}")?;
    }
    Ok(())
}
