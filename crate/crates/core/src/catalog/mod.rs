//! Text formats for the shipped data: catalogs, degeneration certificates
//! and non-degeneration tables.

pub mod certificate;
pub mod entries;
pub mod expr;
pub mod nondeg;

use std::collections::HashMap;

use thiserror::Error;

pub use certificate::{parse_certificates, print_certificates, DegenerationCertificate, ParamCurve};
pub use entries::{parse_catalog, CatalogEntry, CatalogFile, Expectation, ProductDecl};
pub use nondeg::{parse_nondeg_table, NondegPair, NondegTable, RowGroup, TableItem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {reason}")]
pub struct ParseError {
    pub line: usize,
    pub reason: String,
}

pub(crate) fn quoted(s: &str) -> Option<String> {
    let inner = s.trim().strip_prefix('"')?.strip_suffix('"')?;
    (!inner.contains('"')).then(|| inner.to_string())
}

/// Formats a type as `(m,n)`.
pub fn kind_name((m, n): (usize, usize)) -> String {
    format!("({m},{n})")
}

/// Parses `(m,n)`.
pub fn parse_kind(s: &str) -> Option<(usize, usize)> {
    let inner = s.trim().strip_prefix('(')?.strip_suffix(')')?;
    let (a, b) = inner.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

/// All entries from several catalog files, addressable by name.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
    index: HashMap<String, usize>,
}

impl Catalog {
    pub fn from_files(files: Vec<CatalogFile>) -> Result<Self, ParseError> {
        let mut cat = Catalog::default();
        for f in files {
            for e in f.entries {
                if cat.index.contains_key(&e.name) {
                    return Err(ParseError { line: 0, reason: format!("duplicate entry name {}", e.name) });
                }
                cat.index.insert(e.name.clone(), cat.entries.len());
                cat.entries.push(e);
            }
        }
        Ok(cat)
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&CatalogEntry> {
        self.index.get(name).map(|&i| &self.entries[i])
    }

    /// Entries of one type, in file order.
    pub fn of_kind(&self, kind: (usize, usize)) -> Vec<&CatalogEntry> {
        self.entries.iter().filter(|e| e.kind() == kind).collect()
    }

    /// Looks up a table label such as `7`, `43^1` or `31^lambda`.
    pub fn resolve(&self, kind: (usize, usize), label: &str) -> Option<&CatalogEntry> {
        let prefix = kind_name(kind);
        if let Some(e) = self.get(&format!("{prefix}_{label}")) {
            return Some(e);
        }
        let (base, suffix) = label.split_once('^')?;
        self.get(&format!("{prefix}_{base}"))
            .filter(|e| e.param.as_ref().is_some_and(|p| p.name == suffix))
    }

    /// Label used in tables: families carry their parameter (`31^lambda`).
    pub fn table_label(entry: &CatalogEntry) -> String {
        match &entry.param {
            Some(p) => format!("{}^{}", entry.label(), p.name),
            None => entry.label().to_string(),
        }
    }
}
