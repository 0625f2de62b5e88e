//! The kernel proof-trace format: one line per derived lemma.
//!
//! A line has the shape `TAG SIZE (" " DEP)*` where `TAG` is a single
//! uppercase ASCII letter written directly against `SIZE` (no space), `SIZE`
//! is the symbol weight of the statement, and each `DEP` is the 1-based line
//! index of a direct proof dependency. `#` starts a comment that runs to the
//! end of the line; lines that are blank after comment stripping are skipped.
//! Lemma indices count non-blank lines, starting at 1.
//!
//! ```text
//! F13
//! R9
//! C17 2 1   # an application step depending on lines 2 and 1
//! ```
//!
//! Parsing is a single streaming pass: memory is proportional to the graph,
//! not the file.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::LemmaId;

/// One trace line: the inference tag, the symbol weight of the derived
/// statement, and the direct proof dependencies.
///
/// The lemma's own index is its 1-based position in the trace; it is not
/// stored here. Dependencies always point at strictly smaller indices, so a
/// trace is a DAG by construction. The parser collapses duplicate
/// dependencies on a line, keeping first-occurrence order; nodes built
/// programmatically may carry duplicates (a multi-edge) and the tally passes
/// honor the multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaNode {
    /// Inference kind tag, an uppercase ASCII letter.
    pub kind: u8,
    /// Symbol weight of the statement, at least 1.
    pub size: u32,
    /// Direct dependencies, each strictly smaller than this node's index.
    pub deps: Vec<LemmaId>,
}

impl LemmaNode {
    pub fn new(kind: u8, size: u32, deps: Vec<LemmaId>) -> Self {
        LemmaNode { kind, size, deps }
    }
}

/// An ordered sequence of [`LemmaNode`]s; lemma `i` lives at position `i - 1`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProofTrace {
    nodes: Vec<LemmaNode>,
}

impl ProofTrace {
    /// Builds a trace from nodes, checking that every dependency points
    /// strictly below its own line and never at index 0.
    ///
    /// Duplicate dependencies are allowed here (unlike in parsed input) so
    /// that callers can construct multi-edges.
    pub fn from_nodes(nodes: Vec<LemmaNode>) -> Result<Self> {
        for (pos, node) in nodes.iter().enumerate() {
            let index = (pos + 1) as LemmaId;
            for &dep in &node.deps {
                if dep == 0 {
                    return Err(Error::ZeroDependency { line: pos + 1 });
                }
                if dep >= index {
                    return Err(Error::ForwardReference {
                        line: pos + 1,
                        index,
                        dep,
                    });
                }
            }
        }
        Ok(ProofTrace { nodes })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// The node with 1-based index `id`. Panics when out of range.
    pub fn node(&self, id: LemmaId) -> &LemmaNode {
        &self.nodes[(id - 1) as usize]
    }

    pub fn nodes(&self) -> &[LemmaNode] {
        &self.nodes
    }

    /// Iterates `(index, node)` pairs in trace order.
    pub fn iter(&self) -> impl Iterator<Item = (LemmaId, &LemmaNode)> {
        self.nodes
            .iter()
            .enumerate()
            .map(|(pos, n)| ((pos + 1) as LemmaId, n))
    }
}

/// Streaming trace parser: an iterator over parsed nodes.
///
/// Lets callers observe progress (and count lines) without holding the whole
/// file; [`parse_trace`] is the collect-everything convenience wrapper.
#[derive(Debug)]
pub struct TraceReader<R> {
    input: R,
    buf: String,
    /// Physical line number of the most recently read line.
    line_no: usize,
    /// Index the next parsed node will receive.
    next_index: LemmaId,
    done: bool,
}

impl<R: BufRead> TraceReader<R> {
    pub fn new(input: R) -> Self {
        TraceReader {
            input,
            buf: String::new(),
            line_no: 0,
            next_index: 1,
            done: false,
        }
    }

    fn parse_line(&self, line: &str) -> Result<LemmaNode> {
        let mut tokens = line.split_ascii_whitespace();
        let head = tokens.next().expect("caller skips blank lines");

        let head_bytes = head.as_bytes();
        if !head_bytes[0].is_ascii_uppercase() {
            return Err(Error::parse(
                self.line_no,
                format!("expected an uppercase inference tag, found {head:?}"),
            ));
        }
        let kind = head_bytes[0];
        let size: u32 = head[1..].parse().map_err(|_| {
            Error::parse(
                self.line_no,
                format!("expected a decimal size after the tag, found {head:?}"),
            )
        })?;
        if size == 0 {
            return Err(Error::parse(self.line_no, "size must be positive"));
        }

        let mut deps: Vec<LemmaId> = Vec::new();
        for tok in tokens {
            let dep: LemmaId = tok.parse().map_err(|_| {
                Error::parse(self.line_no, format!("invalid dependency index {tok:?}"))
            })?;
            if dep == 0 {
                return Err(Error::ZeroDependency { line: self.line_no });
            }
            if dep >= self.next_index {
                return Err(Error::ForwardReference {
                    line: self.line_no,
                    index: self.next_index,
                    dep,
                });
            }
            if !deps.contains(&dep) {
                deps.push(dep);
            }
        }

        Ok(LemmaNode { kind, size, deps })
    }
}

impl<R: BufRead> Iterator for TraceReader<R> {
    type Item = Result<LemmaNode>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        loop {
            self.buf.clear();
            match self.input.read_line(&mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => {
                    self.done = true;
                    return Some(Err(e.into()));
                }
            }
            self.line_no += 1;

            let text = match self.buf.find('#') {
                Some(pos) => &self.buf[..pos],
                None => &self.buf,
            };
            if text.split_ascii_whitespace().next().is_none() {
                continue;
            }

            let parsed = self.parse_line(text);
            if parsed.is_err() {
                self.done = true;
            } else {
                self.next_index += 1;
            }
            return Some(parsed);
        }
    }
}

/// Parses a whole trace from a reader.
pub fn parse_trace<R: BufRead>(input: R) -> Result<ProofTrace> {
    let nodes = TraceReader::new(input).collect::<Result<Vec<_>>>()?;
    Ok(ProofTrace { nodes })
}

/// Serializes a trace in the canonical format: single spaces, LF endings, no
/// comments. Comment-free canonical input round-trips byte-identically.
pub fn write_trace<W: Write>(trace: &ProofTrace, mut out: W) -> Result<()> {
    for node in trace.nodes() {
        write_node(node, &mut out)?;
    }
    Ok(())
}

pub(crate) fn write_node<W: Write>(node: &LemmaNode, out: &mut W) -> Result<()> {
    write!(out, "{}{}", node.kind as char, node.size)?;
    for dep in &node.deps {
        write!(out, " {dep}")?;
    }
    out.write_all(b"\n")?;
    Ok(())
}
