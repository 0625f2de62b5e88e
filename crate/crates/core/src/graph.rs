//! The inference DAG: a parsed trace plus name/axiom annotations and a
//! precomputed reverse adjacency (who uses whom).
//!
//! Forward edges (dependencies) live on the nodes themselves; reverse edges
//! are stored compressed-sparse-row style in two flat arrays, so building the
//! graph is two counting passes and lookups are a slice index.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::sidecar::{NamedMap, NormalFormMap};
use crate::trace::{LemmaNode, ProofTrace};
use crate::LemmaId;

/// A set of inference tags (uppercase ASCII letters), stored as a bitmask.
///
/// Used to say which tags denote axioms, e.g. `"AD".parse()` for a trace
/// whose axiom schemes and definitions both count as axioms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TagSet(u32);

impl TagSet {
    pub const EMPTY: TagSet = TagSet(0);

    pub fn contains(self, tag: u8) -> bool {
        tag.is_ascii_uppercase() && self.0 & 1 << (tag - b'A') != 0
    }

    pub fn insert(&mut self, tag: u8) {
        debug_assert!(tag.is_ascii_uppercase());
        self.0 |= 1 << (tag - b'A');
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = u8> {
        (b'A'..=b'Z').filter(move |&t| self.contains(t))
    }
}

impl FromStr for TagSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<TagSet> {
        let mut set = TagSet::EMPTY;
        for b in s.bytes() {
            if !b.is_ascii_uppercase() {
                return Err(Error::InvalidParam(format!(
                    "tag set must be uppercase ASCII letters, found {:?}",
                    b as char
                )));
            }
            set.insert(b);
        }
        Ok(set)
    }
}

impl fmt::Display for TagSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for tag in self.iter() {
            write!(f, "{}", tag as char)?;
        }
        Ok(())
    }
}

/// An immutable inference DAG with name and axiom annotations.
#[derive(Debug, Clone)]
pub struct ProofGraph {
    trace: ProofTrace,
    /// `named[i - 1]` is true when lemma `i` carries a theorem name.
    named: Vec<bool>,
    /// `axiom[i - 1]` is true when lemma `i`'s tag is in the axiom set.
    axiom: Vec<bool>,
    axiom_tags: TagSet,
    /// CSR reverse adjacency: users of lemma `i` are
    /// `rev_edges[rev_offsets[i - 1]..rev_offsets[i]]`.
    rev_offsets: Vec<usize>,
    rev_edges: Vec<LemmaId>,
}

impl ProofGraph {
    /// Assembles a graph from a trace, a name map, and the axiom tag set.
    ///
    /// Every named index must refer to a trace line.
    pub fn build(trace: ProofTrace, names: &NamedMap, axiom_tags: TagSet) -> Result<Self> {
        let n = trace.len();
        let mut named = vec![false; n];
        for &index in names.keys() {
            if index == 0 || index as usize > n {
                return Err(Error::IndexOutOfRange {
                    index,
                    len: n,
                });
            }
            named[(index - 1) as usize] = true;
        }
        Ok(Self::assemble(trace, named, axiom_tags))
    }

    fn assemble(trace: ProofTrace, named: Vec<bool>, axiom_tags: TagSet) -> Self {
        let n = trace.len();
        let axiom = trace
            .nodes()
            .iter()
            .map(|node| axiom_tags.contains(node.kind))
            .collect();

        // Counting pass, prefix sums, then a fill pass. Users of each lemma
        // end up sorted ascending because we scan nodes in index order.
        let mut rev_offsets = vec![0usize; n + 1];
        for node in trace.nodes() {
            for &dep in &node.deps {
                rev_offsets[dep as usize] += 1;
            }
        }
        for i in 0..n {
            rev_offsets[i + 1] += rev_offsets[i];
        }
        let mut rev_edges = vec![0 as LemmaId; rev_offsets[n]];
        let mut cursor = rev_offsets.clone();
        for (index, node) in trace.iter() {
            for &dep in &node.deps {
                let slot = &mut cursor[(dep - 1) as usize];
                rev_edges[*slot] = index;
                *slot += 1;
            }
        }

        ProofGraph {
            trace,
            named,
            axiom,
            axiom_tags,
            rev_offsets,
            rev_edges,
        }
    }

    pub fn len(&self) -> usize {
        self.trace.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trace.is_empty()
    }

    pub fn trace(&self) -> &ProofTrace {
        &self.trace
    }

    pub fn node(&self, id: LemmaId) -> &LemmaNode {
        self.trace.node(id)
    }

    /// Direct dependencies `d(id)`, in trace order (with multiplicity).
    pub fn deps(&self, id: LemmaId) -> &[LemmaId] {
        &self.trace.node(id).deps
    }

    /// Direct users `u(id)`: lemmas whose proofs cite `id`, ascending (with
    /// multiplicity).
    pub fn users(&self, id: LemmaId) -> &[LemmaId] {
        let i = (id - 1) as usize;
        &self.rev_edges[self.rev_offsets[i]..self.rev_offsets[i + 1]]
    }

    pub fn is_named(&self, id: LemmaId) -> bool {
        self.named[(id - 1) as usize]
    }

    pub fn is_axiom(&self, id: LemmaId) -> bool {
        self.axiom[(id - 1) as usize]
    }

    /// The name flags as a dense slice (`[i - 1]` for lemma `i`).
    pub fn named_flags(&self) -> &[bool] {
        &self.named
    }

    pub fn axiom_flags(&self) -> &[bool] {
        &self.axiom
    }

    pub fn axiom_tags(&self) -> TagSet {
        self.axiom_tags
    }

    /// Iterates `(index, node)` pairs in trace order.
    pub fn iter(&self) -> impl Iterator<Item = (LemmaId, &LemmaNode)> {
        self.trace.iter()
    }

    /// Lemma indices `1..=len` in trace order.
    pub fn ids(&self) -> impl Iterator<Item = LemmaId> {
        1..=self.trace.len() as LemmaId
    }

    /// Number of dependency edges, counting multiplicity.
    pub fn edge_count(&self) -> usize {
        self.rev_edges.len()
    }

    /// The sub-DAG of everything proved before lemma `j`: nodes `1..j-1`
    /// with name and axiom flags restricted. Dependencies always point
    /// down, so no edge is cut and `j = 1` gives the empty graph.
    pub fn prefix_subgraph(&self, j: LemmaId) -> Result<ProofGraph> {
        let n = self.trace.len();
        if j == 0 || j as usize > n {
            return Err(Error::IndexOutOfRange { index: j, len: n });
        }
        let keep = (j - 1) as usize;
        let nodes = self.trace.nodes()[..keep].to_vec();
        let trace = ProofTrace::from_nodes(nodes).expect("a prefix of a valid trace is valid");
        Ok(Self::assemble(trace, self.named[..keep].to_vec(), self.axiom_tags))
    }

    /// Summary counts for the `stats` report.
    pub fn stats(&self, normal_forms: Option<&NormalFormMap>) -> GraphStats {
        let mut axioms = 0usize;
        let mut zero_dep_non_axiom = 0usize;
        for (id, node) in self.iter() {
            if self.is_axiom(id) {
                axioms += 1;
            } else if node.deps.is_empty() {
                zero_dep_non_axiom += 1;
            }
        }
        let distinct_normal_forms = normal_forms.map(|nf| {
            let mut forms: Vec<&str> = nf.values().map(String::as_str).collect();
            forms.sort_unstable();
            forms.dedup();
            forms.len()
        });
        GraphStats {
            nodes: self.len(),
            edges: self.edge_count(),
            named: self.named.iter().filter(|&&b| b).count(),
            axioms,
            zero_dep_non_axiom,
            distinct_normal_forms,
        }
    }
}

/// Headline counts describing a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphStats {
    pub nodes: usize,
    pub edges: usize,
    pub named: usize,
    pub axioms: usize,
    /// Lemmas with no dependencies whose tag is not an axiom tag; usually a
    /// sign of a mismatched axiom set.
    pub zero_dep_non_axiom: usize,
    pub distinct_normal_forms: Option<usize>,
}
