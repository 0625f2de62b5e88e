//! Side files that accompany a trace: theorem names and normal forms.
//!
//! Both formats are line-oriented and keyed by lemma index. Names use
//! `INDEX SPACE NAME` (name runs to end of line); normal forms use
//! `INDEX TAB STRING`. Blank lines and `#` comments are accepted in the
//! names file; normal-form files are machine-generated, so every line must
//! parse. A repeated index keeps the last entry and logs a warning.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::LemmaId;

/// Lemma index to theorem name. `BTreeMap` keeps iteration in index order,
/// which keeps every writer deterministic.
pub type NamedMap = BTreeMap<LemmaId, String>;

/// Lemma index to canonical statement string.
pub type NormalFormMap = BTreeMap<LemmaId, String>;

/// Reads a names file (`INDEX SPACE NAME`).
pub fn read_names<R: BufRead>(input: R) -> Result<NamedMap> {
    let mut map = NamedMap::new();
    for (line_no, line) in input.lines().enumerate() {
        let line_no = line_no + 1;
        let line = line?;
        let text = match line.find('#') {
            Some(pos) => &line[..pos],
            None => &line[..],
        };
        let text = text.trim();
        if text.is_empty() {
            continue;
        }
        let (index, name) = text.split_once(' ').ok_or_else(|| {
            Error::parse(line_no, "expected \"INDEX NAME\"")
        })?;
        let index: LemmaId = index
            .parse()
            .map_err(|_| Error::parse(line_no, format!("invalid lemma index {index:?}")))?;
        if index == 0 {
            return Err(Error::parse(line_no, "lemma indices start at 1"));
        }
        let name = name.trim();
        if name.is_empty() {
            return Err(Error::parse(line_no, "empty theorem name"));
        }
        if let Some(old) = map.insert(index, name.to_string()) {
            log::warn!("line {line_no}: index {index} renamed from {old:?} to {name:?}");
        }
    }
    Ok(map)
}

/// Writes a names file in canonical form: ascending index, single space.
pub fn write_names<W: Write>(names: &NamedMap, mut out: W) -> Result<()> {
    for (index, name) in names {
        writeln!(out, "{index} {name}")?;
    }
    Ok(())
}

/// Reads a normal-form file (`INDEX TAB STRING`).
pub fn read_normal_forms<R: BufRead>(input: R) -> Result<NormalFormMap> {
    let mut map = NormalFormMap::new();
    for (line_no, line) in input.lines().enumerate() {
        let line_no = line_no + 1;
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let (index, form) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(line_no, "expected \"INDEX<TAB>STRING\""))?;
        let index: LemmaId = index
            .parse()
            .map_err(|_| Error::parse(line_no, format!("invalid lemma index {index:?}")))?;
        if index == 0 {
            return Err(Error::parse(line_no, "lemma indices start at 1"));
        }
        if let Some(old) = map.insert(index, form.to_string()) {
            log::warn!("line {line_no}: normal form for {index} replaced ({old:?})");
        }
    }
    Ok(map)
}
