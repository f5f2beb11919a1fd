//! Catalog files: one `[superalgebra]` section per entry, with the nonzero
//! products and the expected table columns.

use std::collections::HashSet;
use std::fmt;

use crate::algebra::{Basis, Param, SuperAlgebra};
use crate::invariants::{GradedDims, TableRow};
use crate::scalar::rational::{fmt_rational, parse_rational};
use crate::scalar::Rational;

use super::expr::{Expr, ExprDisplay, Symbols};
use super::{quoted, ParseError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductDecl {
    pub left: Basis,
    pub right: Basis,
    pub value: Expr,
}

/// Expected values of the Obs / nilindex / Aut / Ann columns.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Expectation {
    pub associative: Option<bool>,
    pub nilindex: Option<usize>,
    pub aut: Option<usize>,
    pub ann: Option<GradedDims>,
}

impl Expectation {
    /// Human-readable mismatches against a computed row.
    pub fn diff(&self, row: &TableRow) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(a) = self.associative.filter(|a| *a != row.associative) {
            out.push(format!("obs: expected {}, got {}", obs(a), obs(row.associative)));
        }
        if let Some(k) = self.nilindex.filter(|k| *k != row.nilindex) {
            out.push(format!("nilindex: expected {k}, got {}", row.nilindex));
        }
        if let Some(k) = self.aut.filter(|k| *k != row.aut) {
            out.push(format!("aut: expected {k}, got {}", row.aut));
        }
        if let Some(d) = self.ann.filter(|d| *d != row.ann) {
            out.push(format!("ann: expected {d}, got {}", row.ann));
        }
        out
    }
}

fn obs(a: bool) -> &'static str {
    if a {
        "A"
    } else {
        "NA"
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub even: usize,
    pub odd: usize,
    pub param: Option<Param>,
    pub products: Vec<ProductDecl>,
    pub expect: Expectation,
    pub algebra: SuperAlgebra,
}

impl CatalogEntry {
    pub fn kind(&self) -> (usize, usize) {
        (self.even, self.odd)
    }

    /// The part of the name after `(m,n)_`, e.g. `31` or `43^1`.
    pub fn label(&self) -> &str {
        self.name.split_once(")_").map_or(&self.name, |(_, l)| l)
    }

    pub fn is_family(&self) -> bool {
        self.param.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CatalogFile {
    pub entries: Vec<CatalogEntry>,
}

#[derive(Default)]
struct Draft {
    line: usize,
    name: Option<String>,
    even: Option<usize>,
    odd: Option<usize>,
    param: Option<String>,
    excluded: Vec<Rational>,
    products: Vec<(usize, String, String, String)>,
    expect: Expectation,
}

fn err(line: usize, reason: impl Into<String>) -> ParseError {
    ParseError { line, reason: reason.into() }
}

fn parse_dims(s: &str) -> Option<GradedDims> {
    let inner = s.trim().strip_prefix('(')?.strip_suffix(')')?;
    let (a, b) = inner.split_once(',')?;
    Some(GradedDims::new(a.trim().parse().ok()?, b.trim().parse().ok()?))
}

impl Draft {
    fn finish(self) -> Result<CatalogEntry, ParseError> {
        let line = self.line;
        let name = self.name.ok_or_else(|| err(line, "entry without a name"))?;
        let even = self.even.ok_or_else(|| err(line, format!("{name}: missing `even`")))?;
        let odd = self.odd.ok_or_else(|| err(line, format!("{name}: missing `odd`")))?;
        let param = self.param.map(|p| Param { name: p, excluded: self.excluded.clone() });
        if param.is_none() && !self.excluded.is_empty() {
            return Err(err(line, format!("{name}: exclusion without a parameter")));
        }
        let sym = Symbols { param: param.as_ref().map(|p| p.name.as_str()), allow_t: false, want_basis: true };
        let mut builder = SuperAlgebra::builder(even, odd).name(name.clone());
        if let Some(p) = &param {
            builder = builder.param(p.clone());
        }
        let mut products = Vec::new();
        for (pline, l, r, rhs) in self.products {
            let left = Basis::parse(&l).ok_or_else(|| err(pline, format!("unknown basis symbol {l:?}")))?;
            let right = Basis::parse(&r).ok_or_else(|| err(pline, format!("unknown basis symbol {r:?}")))?;
            let value = Expr::parse(&rhs, &sym).map_err(|e| err(pline, e))?;
            for b in [left, right].into_iter().chain(value.bases()) {
                let ok = match b {
                    Basis::E(i) => i < even,
                    Basis::F(j) => j < odd,
                };
                if !ok {
                    return Err(err(pline, format!("basis symbol {b} not declared in type ({even},{odd})")));
                }
            }
            let terms: Vec<(Basis, crate::Scalar)> =
                value.bases().into_iter().map(|b| (b, value.coefficient(Some(b), 1))).collect();
            builder = builder.product(left, right, &terms).map_err(|e| err(pline, e.to_string()))?;
            products.push(ProductDecl { left, right, value });
        }
        Ok(CatalogEntry { name, even, odd, param, products, expect: self.expect, algebra: builder.build() })
    }
}

pub fn parse_catalog(text: &str) -> Result<CatalogFile, ParseError> {
    let mut entries = Vec::new();
    let mut names = HashSet::new();
    let mut draft: Option<Draft> = None;
    let mut push = |d: Draft, entries: &mut Vec<CatalogEntry>| -> Result<(), ParseError> {
        let line = d.line;
        let e = d.finish()?;
        if !names.insert(e.name.clone()) {
            return Err(err(line, format!("duplicate entry name {}", e.name)));
        }
        entries.push(e);
        Ok(())
    };
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line == "[superalgebra]" {
            if let Some(d) = draft.take() {
                push(d, &mut entries)?;
            }
            draft = Some(Draft { line: ln, ..Draft::default() });
            continue;
        }
        if line.starts_with('[') {
            return Err(err(ln, format!("unknown section {line}")));
        }
        let d = draft.as_mut().ok_or_else(|| err(ln, "content before the first [superalgebra] section"))?;
        let (key, value) = line.split_once('=').ok_or_else(|| err(ln, "expected `key = value`"))?;
        let (key, value) = (key.trim(), value.trim());
        let words: Vec<&str> = key.split_whitespace().collect();
        match words.as_slice() {
            ["name"] => d.name = Some(quoted(value).ok_or_else(|| err(ln, "name must be a quoted string"))?),
            ["even"] => d.even = Some(value.parse().map_err(|_| err(ln, "bad even dimension"))?),
            ["odd"] => d.odd = Some(value.parse().map_err(|_| err(ln, "bad odd dimension"))?),
            ["params"] => {
                if value.split(',').count() != 1 || value.is_empty() {
                    return Err(err(ln, "exactly one family parameter is supported"));
                }
                if !value.chars().all(|c| c.is_ascii_alphabetic()) || value == "t" || Basis::parse(value).is_some() {
                    return Err(err(ln, format!("bad parameter name {value:?}")));
                }
                d.param = Some(value.to_string());
            }
            ["exclude", p] => {
                if d.param.as_deref() != Some(*p) {
                    return Err(err(ln, format!("undeclared parameter {p:?}")));
                }
                d.excluded.push(parse_rational(value).ok_or_else(|| err(ln, "bad excluded value"))?);
            }
            ["product", pair] => {
                let (l, r) = pair.split_once('*').ok_or_else(|| err(ln, "expected `product a*b`"))?;
                d.products.push((ln, l.to_string(), r.to_string(), value.to_string()));
            }
            ["expect", what] => match *what {
                "obs" => {
                    d.expect.associative = Some(match value {
                        "A" => true,
                        "NA" => false,
                        _ => return Err(err(ln, "obs must be A or NA")),
                    })
                }
                "nilindex" => d.expect.nilindex = Some(value.parse().map_err(|_| err(ln, "bad nilindex"))?),
                "aut" => d.expect.aut = Some(value.parse().map_err(|_| err(ln, "bad aut"))?),
                "ann" => d.expect.ann = Some(parse_dims(value).ok_or_else(|| err(ln, "ann must look like (a,b)"))?),
                other => return Err(err(ln, format!("unknown expectation {other:?}"))),
            },
            _ => return Err(err(ln, format!("unknown key {key:?}"))),
        }
    }
    if let Some(d) = draft.take() {
        push(d, &mut entries)?;
    }
    Ok(CatalogFile { entries })
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[superalgebra]")?;
        writeln!(f, "name = \"{}\"", self.name)?;
        writeln!(f, "even = {}", self.even)?;
        writeln!(f, "odd = {}", self.odd)?;
        let pname = self.param.as_ref().map_or("", |p| p.name.as_str());
        if let Some(p) = &self.param {
            writeln!(f, "params = {}", p.name)?;
            for x in &p.excluded {
                writeln!(f, "exclude {} = {}", p.name, fmt_rational(x))?;
            }
        }
        for p in &self.products {
            writeln!(f, "product {}*{} = {}", p.left, p.right, ExprDisplay { expr: &p.value, param: pname })?;
        }
        let e = &self.expect;
        if let Some(a) = e.associative {
            writeln!(f, "expect obs = {}", obs(a))?;
        }
        if let Some(k) = e.nilindex {
            writeln!(f, "expect nilindex = {k}")?;
        }
        if let Some(k) = e.aut {
            writeln!(f, "expect aut = {k}")?;
        }
        if let Some(d) = e.ann {
            writeln!(f, "expect ann = {d}")?;
        }
        Ok(())
    }
}

impl fmt::Display for CatalogFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}
