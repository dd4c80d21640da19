//! On-disk formats.
//!
//! A table file is line-oriented text:
//!
//! ```text
//! gssc 1
//! m=3 n=2
//! 0
//! 0
//! ...
//! ```
//!
//! followed by exactly `(m!)^n` winner ids in profile-index order.
//!
//! A trace file starts with the line `gssc-trace 1`, then one JSON header
//! record (lemma, dimensions, parameters, conclusion, step count), then one
//! JSON record per step carrying the full per-voter order indices.

use std::env;

use gssc_core::lemma::{LemmaTag, ProofTrace, TraceParams, TraceStep};
use gssc_core::prefcore::{Alternative, Dims, ScfTable, DEFAULT_SIZE_GUARD};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const TABLE_TAG: &str = "gssc 1";
pub const TRACE_TAG: &str = "gssc-trace 1";

/// Overrides the table-size guard when set to a positive integer.
pub const SIZE_GUARD_VAR: &str = "GSSC_SIZE_GUARD";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    At { line: usize, msg: String },
    #[error("{0}")]
    Whole(String),
}

impl FormatError {
    fn at(line: usize, msg: impl Into<String>) -> Self {
        FormatError::At { line, msg: msg.into() }
    }
}

/// The active size guard: the environment override if present, otherwise
/// the library default.
pub fn size_guard() -> Result<u64, FormatError> {
    match env::var(SIZE_GUARD_VAR) {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .ok()
            .filter(|&g| g > 0)
            .ok_or_else(|| FormatError::Whole(format!("{SIZE_GUARD_VAR}={v:?} is not a positive integer"))),
        Err(_) => Ok(DEFAULT_SIZE_GUARD),
    }
}

pub fn write_table(f: &ScfTable) -> String {
    let mut s = String::with_capacity(16 + 2 * f.entries().len());
    s.push_str(TABLE_TAG);
    s.push('\n');
    s.push_str(&format!("m={} n={}\n", f.m(), f.n()));
    for a in f.entries() {
        s.push_str(&a.to_string());
        s.push('\n');
    }
    s
}

pub fn parse_table(text: &str) -> Result<ScfTable, FormatError> {
    parse_table_with_guard(text, size_guard()?)
}

pub fn parse_table_with_guard(text: &str, guard: u64) -> Result<ScfTable, FormatError> {
    let mut lines = text.lines().map(|l| l.strip_suffix('\r').unwrap_or(l)).enumerate();
    match lines.next() {
        Some((_, TABLE_TAG)) => {}
        Some((_, other)) => {
            return Err(FormatError::at(1, format!("expected {TABLE_TAG:?}, found {other:?}")))
        }
        None => return Err(FormatError::at(1, "empty file")),
    }
    let Some((_, dims_line)) = lines.next() else {
        return Err(FormatError::at(2, "missing dimension line"));
    };
    let (m, n) = parse_dims_line(dims_line).ok_or_else(|| {
        FormatError::at(2, format!("expected \"m=<m> n=<n>\", found {dims_line:?}"))
    })?;
    let dims = Dims::with_guard(m, n, guard).map_err(|e| FormatError::at(2, e.to_string()))?;
    let want = dims.num_profiles();

    let mut entries = Vec::with_capacity(want);
    let mut last_line = 2;
    let mut blank_at = None;
    for (k, line) in lines {
        let lineno = k + 1;
        if line.trim().is_empty() {
            blank_at.get_or_insert(lineno);
            continue;
        }
        // blank lines are only allowed at the end
        if let Some(b) = blank_at {
            return Err(FormatError::at(b, "blank line inside table body"));
        }
        if entries.len() == want {
            return Err(FormatError::at(lineno, format!("more than {want} entries")));
        }
        let v: u8 = line
            .trim()
            .parse()
            .map_err(|_| FormatError::at(lineno, format!("not an alternative id: {line:?}")))?;
        if v as usize >= m {
            return Err(FormatError::at(lineno, format!("alternative {v} out of range for m={m}")));
        }
        entries.push(Alternative(v));
        last_line = lineno;
    }
    if entries.len() != want {
        return Err(FormatError::at(
            last_line + 1,
            format!("truncated: expected {want} entries, found {}", entries.len()),
        ));
    }
    ScfTable::from_entries(dims, entries).map_err(|e| FormatError::Whole(e.to_string()))
}

fn parse_dims_line(line: &str) -> Option<(usize, usize)> {
    let mut parts = line.split_whitespace();
    let m = parts.next()?.strip_prefix("m=")?.parse().ok()?;
    let n = parts.next()?.strip_prefix("n=")?.parse().ok()?;
    parts.next().is_none().then_some((m, n))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TraceHeader {
    lemma: LemmaTag,
    m: usize,
    n: usize,
    params: TraceParams,
    conclusion: String,
    steps: usize,
}

pub fn write_trace(t: &ProofTrace) -> String {
    let header = TraceHeader {
        lemma: t.lemma,
        m: t.m,
        n: t.n,
        params: t.params.clone(),
        conclusion: t.conclusion.clone(),
        steps: t.steps.len(),
    };
    let mut s = String::new();
    s.push_str(TRACE_TAG);
    s.push('\n');
    s.push_str(&serde_json::to_string(&header).expect("header serializes"));
    s.push('\n');
    for step in &t.steps {
        s.push_str(&serde_json::to_string(step).expect("step serializes"));
        s.push('\n');
    }
    s
}

pub fn parse_trace(text: &str) -> Result<ProofTrace, FormatError> {
    let mut lines = text
        .lines()
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, TRACE_TAG)) => {}
        Some((k, other)) => {
            return Err(FormatError::at(k + 1, format!("expected {TRACE_TAG:?}, found {other:?}")))
        }
        None => return Err(FormatError::at(1, "empty file")),
    }
    let Some((k, header_line)) = lines.next() else {
        return Err(FormatError::at(2, "missing header record"));
    };
    let header: TraceHeader = json_at(k + 1, header_line)?;
    let mut steps = Vec::with_capacity(header.steps);
    let mut last = k + 1;
    for (k, line) in lines {
        steps.push(json_at::<TraceStep>(k + 1, line)?);
        last = k + 1;
    }
    if steps.len() != header.steps {
        return Err(FormatError::at(
            last,
            format!("header announces {} steps, found {}", header.steps, steps.len()),
        ));
    }
    Ok(ProofTrace {
        lemma: header.lemma,
        m: header.m,
        n: header.n,
        params: header.params,
        steps,
        conclusion: header.conclusion,
    })
}

fn json_at<T: for<'de> Deserialize<'de>>(line: usize, text: &str) -> Result<T, FormatError> {
    serde_json::from_str(text)
        .map_err(|e| FormatError::at(line, format!("column {}: {e}", e.column())))
}
