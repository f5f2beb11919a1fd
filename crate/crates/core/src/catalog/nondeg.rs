//! Non-degeneration tables.
//!
//! ```text
//! type = (1,4)
//! table = 1
//! reason a_functor: 4 -> 2; 5,6,9 -> 3
//! reason annihilator(1): 9 -> 5
//! ```
//!
//! `k1,...,kr -> l1,...,ls` stands for every pair `kp -> lq`; `11-14` is a
//! range of plain numeric labels.

use std::fmt;

use crate::degeneration::NondegClass;

use super::{kind_name, parse_kind, ParseError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableItem {
    Label(String),
    Range(u32, u32),
}

impl TableItem {
    fn expand(&self) -> Vec<String> {
        match self {
            TableItem::Label(l) => vec![l.clone()],
            TableItem::Range(a, b) => (*a..=*b).map(|k| k.to_string()).collect(),
        }
    }
}

impl fmt::Display for TableItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableItem::Label(l) => f.write_str(l),
            TableItem::Range(a, b) => write!(f, "{a}-{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowGroup {
    pub sources: Vec<TableItem>,
    pub targets: Vec<TableItem>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReasonLine {
    pub reason: NondegClass,
    pub groups: Vec<RowGroup>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NondegTable {
    pub kind: (usize, usize),
    pub id: u32,
    pub lines: Vec<ReasonLine>,
}

/// One expanded pair `source ↛ target` with the stated reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NondegPair {
    pub source: String,
    pub target: String,
    pub reason: NondegClass,
}

impl NondegTable {
    pub fn expand(&self) -> Vec<NondegPair> {
        let mut out = Vec::new();
        for line in &self.lines {
            for g in &line.groups {
                for s in g.sources.iter().flat_map(TableItem::expand) {
                    for t in g.targets.iter().flat_map(TableItem::expand) {
                        out.push(NondegPair { source: s.clone(), target: t, reason: line.reason.clone() });
                    }
                }
            }
        }
        out
    }
}

fn err(line: usize, reason: impl Into<String>) -> ParseError {
    ParseError { line, reason: reason.into() }
}

fn parse_items(s: &str, ln: usize) -> Result<Vec<TableItem>, ParseError> {
    s.split(',')
        .map(|item| {
            let item = item.trim();
            if item.is_empty() {
                return Err(err(ln, "empty label"));
            }
            if let Some((a, b)) = item.split_once('-') {
                let a: u32 = a.trim().parse().map_err(|_| err(ln, format!("bad range {item:?}")))?;
                let b: u32 = b.trim().parse().map_err(|_| err(ln, format!("bad range {item:?}")))?;
                if a >= b {
                    return Err(err(ln, format!("empty range {item:?}")));
                }
                return Ok(TableItem::Range(a, b));
            }
            if !item.chars().all(|c| c.is_ascii_alphanumeric() || c == '^') {
                return Err(err(ln, format!("bad label {item:?}")));
            }
            Ok(TableItem::Label(item.to_string()))
        })
        .collect()
}

pub fn parse_nondeg_table(text: &str) -> Result<NondegTable, ParseError> {
    let mut kind = None;
    let mut id = None;
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("reason ") {
            // the reason may itself contain ':' only inside parentheses
            let mut depth = 0;
            let colon = rest
                .char_indices()
                .find(|&(_, c)| {
                    match c {
                        '(' => depth += 1,
                        ')' => depth -= 1,
                        _ => {}
                    }
                    c == ':' && depth == 0
                })
                .map(|(i, _)| i)
                .ok_or_else(|| err(ln, "expected `reason <class>: rows`"))?;
            let reason: NondegClass = rest[..colon].parse().map_err(|e: String| err(ln, e))?;
            let mut groups = Vec::new();
            for g in rest[colon + 1..].split(';') {
                let (s, t) = g.split_once("->").ok_or_else(|| err(ln, format!("expected `sources -> targets` in {g:?}")))?;
                groups.push(RowGroup { sources: parse_items(s, ln)?, targets: parse_items(t, ln)? });
            }
            lines.push(ReasonLine { reason, groups });
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| err(ln, "expected `key = value`"))?;
        match key.trim() {
            "type" => kind = Some(parse_kind(value).ok_or_else(|| err(ln, "type must look like (m,n)"))?),
            "table" => id = Some(value.trim().parse().map_err(|_| err(ln, "bad table id"))?),
            other => return Err(err(ln, format!("unknown key {other:?}"))),
        }
    }
    Ok(NondegTable {
        kind: kind.ok_or_else(|| err(0, "missing `type`"))?,
        id: id.ok_or_else(|| err(0, "missing `table`"))?,
        lines,
    })
}

fn join(items: &[TableItem]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for NondegTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "type = {}", kind_name(self.kind))?;
        writeln!(f, "table = {}", self.id)?;
        for line in &self.lines {
            let rows: Vec<String> =
                line.groups.iter().map(|g| format!("{} -> {}", join(&g.sources), join(&g.targets))).collect();
            writeln!(f, "reason {}: {}", line.reason, rows.join("; "))?;
        }
        Ok(())
    }
}
