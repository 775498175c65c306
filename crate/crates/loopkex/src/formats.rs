//! Text formats for right loops and groups.
//!
//! ```text
//! rightloop v1            # or `group v1`
//! labels: e x1 x2
//! e  x1 x2                # row i: x_i o x_0, x_i o x_1, ...
//! x1 e  x1
//! x2 x2 e
//! ```
//!
//! `#` starts a comment. Whitespace is insignificant when reading; writing
//! always produces single spaces and a trailing newline.

use std::fmt::Write as _;

use loopkex_core::c_groupoid::CGroupoidError;
use loopkex_core::{GroupPresentation, LoopError, RightLoop};
use sha2::{Digest, Sha256};

pub const LOOP_HEADER: &str = "rightloop v1";
pub const GROUP_HEADER: &str = "group v1";

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid right loop: {0}")]
    Loop(#[from] LoopError),
    #[error("invalid group data: {0}")]
    Group(#[from] CGroupoidError),
}

impl FormatError {
    /// Whether the text parsed but describes an invalid structure.
    pub fn is_violation(&self) -> bool {
        !matches!(self, FormatError::Syntax { .. })
    }
}

/// Labels and rows of a table file, before any algebraic validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTable {
    pub labels: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

const RESERVED: &[char] = &['(', ')', ';', ',', '#'];

/// Reads the header, label line and table rows of a table file.
pub fn parse_table(text: &str, header: &str) -> Result<RawTable, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (n, first) = lines.next().ok_or_else(|| syntax(1, format!("expected `{header}`")))?;
    if first.split_whitespace().collect::<Vec<_>>() != header.split(' ').collect::<Vec<_>>() {
        return Err(syntax(n, format!("expected `{header}`, found `{first}`")));
    }
    let (n, label_line) = lines.next().ok_or_else(|| syntax(n + 1, "missing `labels:` line"))?;
    let rest = label_line
        .strip_prefix("labels:")
        .ok_or_else(|| syntax(n, "expected `labels: ...`"))?;
    let labels: Vec<String> = rest.split_whitespace().map(str::to_owned).collect();
    if labels.is_empty() {
        return Err(syntax(n, "no labels"));
    }
    if let Some(bad) = labels.iter().find(|l| l.contains(RESERVED)) {
        return Err(syntax(n, format!("label `{bad}` contains a reserved character")));
    }
    let rows = lines
        .map(|(_, l)| l.split_whitespace().map(str::to_owned).collect())
        .collect();
    Ok(RawTable { labels, rows })
}

pub fn parse_loop(text: &str) -> Result<RightLoop, FormatError> {
    let raw = parse_table(text, LOOP_HEADER)?;
    Ok(RightLoop::validate(&raw.labels, &raw.rows)?)
}

pub fn parse_group(text: &str, subgroup: &[&str], transversal: &[&str]) -> Result<GroupPresentation, FormatError> {
    let raw = parse_table(text, GROUP_HEADER)?;
    Ok(GroupPresentation::new(&raw.labels, &raw.rows, subgroup, transversal)?)
}

fn write_table(header: &str, labels: &[String], cell: impl Fn(usize, usize) -> usize) -> String {
    let n = labels.len();
    let mut out = String::new();
    writeln!(out, "{header}").unwrap();
    writeln!(out, "labels: {}", labels.join(" ")).unwrap();
    for i in 0..n {
        let row: Vec<&str> = (0..n).map(|j| labels[cell(i, j)].as_str()).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    out
}

/// Canonical loop file text.
pub fn write_loop(lp: &RightLoop) -> String {
    write_table(LOOP_HEADER, lp.domain().labels(), |i, j| lp.mul(i, j))
}

/// Canonical group file text.
pub fn write_group(group: &GroupPresentation) -> String {
    write_table(GROUP_HEADER, group.domain().labels(), |i, j| group.mul(i, j))
}

/// `sha256:<hex>` of the canonical loop text; identifies the loop in
/// transcripts independently of how the input file was formatted.
pub fn loop_hash(lp: &RightLoop) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(write_loop(lp).as_bytes())))
}

/// Splits a comma-separated label list such as `e,x1,x2`.
pub fn split_labels(list: &str) -> Vec<&str> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}
