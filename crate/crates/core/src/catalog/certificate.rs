//! Degeneration certificate files.
//!
//! ```text
//! [degeneration]
//! source = "(2,3)_31"
//! target = "(2,3)_10"
//! param lambda = t^-1
//! basis E1 = e1
//! basis E2 = t^-1*e2
//! basis F1 = f1
//! ```

use std::fmt;

use crate::scalar::rational::{fmt_rational, parse_rational};
use crate::scalar::Rational;

use super::expr::{Expr, ExprDisplay, Symbols};
use super::{quoted, Catalog, ParseError};

/// Substitution of the source family parameter by an expression in `t`
/// (and possibly the target's own parameter).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamCurve {
    pub name: String,
    pub value: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegenerationCertificate {
    pub source: String,
    pub target: String,
    pub param: Option<ParamCurve>,
    /// Sample values of the target parameter checked besides the symbolic one.
    pub samples: Vec<Rational>,
    pub even: Vec<Expr>,
    pub odd: Vec<Expr>,
    /// Name of the target's parameter, used when printing.
    pub target_param: Option<String>,
}

impl DegenerationCertificate {
    /// `L` such that `t := s^L` clears every fractional exponent.
    pub fn exponent_lcm(&self) -> u32 {
        let exprs = self.even.iter().chain(&self.odd).chain(self.param.iter().map(|p| &p.value));
        exprs.fold(1, |acc, e| num_integer::lcm(acc, e.exponent_lcm()))
    }
}

fn err(line: usize, reason: impl Into<String>) -> ParseError {
    ParseError { line, reason: reason.into() }
}

#[derive(Default)]
struct Draft {
    line: usize,
    source: Option<String>,
    target: Option<String>,
    param: Option<(usize, String, String)>,
    samples: Vec<(usize, String, String)>,
    basis: Vec<(usize, String, String)>,
}

impl Draft {
    fn finish(self, catalog: &Catalog) -> Result<DegenerationCertificate, ParseError> {
        let line = self.line;
        let source = self.source.ok_or_else(|| err(line, "missing source"))?;
        let target = self.target.ok_or_else(|| err(line, "missing target"))?;
        let src = catalog.get(&source).ok_or_else(|| err(line, format!("unknown source {source:?}")))?;
        let tgt = catalog.get(&target).ok_or_else(|| err(line, format!("unknown target {target:?}")))?;
        if src.kind() != tgt.kind() {
            return Err(err(line, "source and target have different types"));
        }
        let (m, n) = src.kind();
        let target_param = tgt.param.as_ref().map(|p| p.name.clone());
        let tsym = |want_basis| Symbols { param: target_param.as_deref(), allow_t: true, want_basis };
        let param = match self.param {
            None => None,
            Some((pl, name, value)) => {
                if src.param.as_ref().map(|p| p.name.as_str()) != Some(name.as_str()) {
                    return Err(err(pl, format!("{source} has no parameter {name:?}")));
                }
                let value = Expr::parse(&value, &tsym(false)).map_err(|e| err(pl, e))?;
                Some(ParamCurve { name, value })
            }
        };
        let mut samples = Vec::new();
        for (sl, name, value) in self.samples {
            if target_param.as_deref() != Some(name.as_str()) {
                return Err(err(sl, format!("{target} has no parameter {name:?}")));
            }
            samples.push(parse_rational(&value).ok_or_else(|| err(sl, "bad sample value"))?);
        }
        let mut even: Vec<Option<Expr>> = vec![None; m];
        let mut odd: Vec<Option<Expr>> = vec![None; n];
        for (bl, slot, value) in self.basis {
            let (kind, idx) = slot.split_at(1);
            let k: usize = idx.parse().map_err(|_| err(bl, format!("bad basis slot {slot:?}")))?;
            let cell = match kind {
                "E" if (1..=m).contains(&k) => &mut even[k - 1],
                "F" if (1..=n).contains(&k) => &mut odd[k - 1],
                _ => return Err(err(bl, format!("basis slot {slot} outside type ({m},{n})"))),
            };
            if cell.is_some() {
                return Err(err(bl, format!("basis slot {slot} given twice")));
            }
            let expr = Expr::parse(&value, &tsym(true)).map_err(|e| err(bl, e))?;
            for b in expr.bases() {
                let ok = match (kind, b) {
                    ("E", crate::Basis::E(i)) => i < m,
                    ("F", crate::Basis::F(j)) => j < n,
                    _ => false,
                };
                if !ok {
                    return Err(err(bl, format!("{slot} = {value}: coordinates must be homogeneous of the slot's parity")));
                }
            }
            *cell = Some(expr);
        }
        let collect = |v: Vec<Option<Expr>>, kind: &str| -> Result<Vec<Expr>, ParseError> {
            v.into_iter()
                .enumerate()
                .map(|(i, e)| e.ok_or_else(|| err(line, format!("missing basis slot {kind}{}", i + 1))))
                .collect()
        };
        Ok(DegenerationCertificate {
            source,
            target,
            param,
            samples,
            even: collect(even, "E")?,
            odd: collect(odd, "F")?,
            target_param,
        })
    }
}

pub fn parse_certificates(text: &str, catalog: &Catalog) -> Result<Vec<DegenerationCertificate>, ParseError> {
    let mut out = Vec::new();
    let mut draft: Option<Draft> = None;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line == "[degeneration]" {
            if let Some(d) = draft.take() {
                out.push(d.finish(catalog)?);
            }
            draft = Some(Draft { line: ln, ..Draft::default() });
            continue;
        }
        if line.starts_with('[') {
            return Err(err(ln, format!("unknown section {line}")));
        }
        let d = draft.as_mut().ok_or_else(|| err(ln, "content before the first [degeneration] section"))?;
        let (key, value) = line.split_once('=').ok_or_else(|| err(ln, "expected `key = value`"))?;
        let value = value.trim().to_string();
        let words: Vec<&str> = key.split_whitespace().collect();
        match words.as_slice() {
            ["source"] => d.source = Some(quoted(&value).ok_or_else(|| err(ln, "source must be quoted"))?),
            ["target"] => d.target = Some(quoted(&value).ok_or_else(|| err(ln, "target must be quoted"))?),
            ["param", name] => {
                if d.param.is_some() {
                    return Err(err(ln, "parameter curve given twice"));
                }
                d.param = Some((ln, name.to_string(), value));
            }
            ["sample", name] => d.samples.push((ln, name.to_string(), value)),
            ["basis", slot] => d.basis.push((ln, slot.to_string(), value)),
            _ => return Err(err(ln, format!("unknown key {:?}", key.trim()))),
        }
    }
    if let Some(d) = draft.take() {
        out.push(d.finish(catalog)?);
    }
    Ok(out)
}

impl fmt::Display for DegenerationCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tp = self.target_param.as_deref().unwrap_or("");
        writeln!(f, "[degeneration]")?;
        writeln!(f, "source = \"{}\"", self.source)?;
        writeln!(f, "target = \"{}\"", self.target)?;
        if let Some(p) = &self.param {
            writeln!(f, "param {} = {}", p.name, ExprDisplay { expr: &p.value, param: tp })?;
        }
        for s in &self.samples {
            writeln!(f, "sample {tp} = {}", fmt_rational(s))?;
        }
        for (i, e) in self.even.iter().enumerate() {
            writeln!(f, "basis E{} = {}", i + 1, ExprDisplay { expr: e, param: tp })?;
        }
        for (i, e) in self.odd.iter().enumerate() {
            writeln!(f, "basis F{} = {}", i + 1, ExprDisplay { expr: e, param: tp })?;
        }
        Ok(())
    }
}

pub fn print_certificates(certs: &[DegenerationCertificate]) -> String {
    certs.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n")
}
