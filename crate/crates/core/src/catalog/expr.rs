//! Linear-combination expressions shared by the catalog and certificate
//! formats: `[sign][rational*][t^q*][param*]basis` terms joined by `+`/`-`.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::Basis;
use crate::scalar::rational::{fmt_rational, is_neg, parse_rational};
use crate::scalar::{LaurentPoly, Rational, Scalar};

/// `coeff · t^t_exp · p^param_power · basis` (basis absent for scalar expressions).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: Rational,
    pub t_exp: Rational,
    pub param_power: u32,
    pub basis: Option<Basis>,
}

/// Sum of [`Term`]s, kept in the order written.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Expr {
    pub terms: Vec<Term>,
}

/// What a factor name may refer to while parsing.
pub struct Symbols<'a> {
    pub param: Option<&'a str>,
    pub allow_t: bool,
    pub want_basis: bool,
}

fn split_terms(s: &str) -> Result<Vec<(bool, String)>, String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let mut depth = 0i32;
    let mut prev: Option<char> = None;
    for c in s.chars() {
        if c.is_whitespace() {
            continue;
        }
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth == 0 && (c == '+' || c == '-') && !matches!(prev, Some('^') | Some('*')) {
            if prev.is_some() {
                if cur.is_empty() {
                    return Err(format!("dangling sign in {s:?}"));
                }
                out.push((neg, std::mem::take(&mut cur)));
            }
            neg = c == '-';
            prev = Some(c);
            continue;
        }
        cur.push(c);
        prev = Some(c);
    }
    if depth != 0 {
        return Err(format!("unbalanced parentheses in {s:?}"));
    }
    if cur.is_empty() {
        return Err(format!("empty expression {s:?}"));
    }
    out.push((neg, cur));
    Ok(out)
}

fn split_factors(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '*' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn parse_exponent(s: &str) -> Option<Rational> {
    let inner = s.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(s);
    let r = parse_rational(inner)?;
    // a fraction must be written in parentheses
    if inner.contains('/') && !s.starts_with('(') {
        return None;
    }
    Some(r)
}

fn parse_term(neg: bool, body: &str, sym: &Symbols<'_>) -> Result<Term, String> {
    let mut term = Term { coeff: Rational::one(), t_exp: Rational::zero(), param_power: 0, basis: None };
    let factors = split_factors(body);
    for (i, f) in factors.iter().enumerate() {
        if f.is_empty() {
            return Err(format!("empty factor in {body:?}"));
        }
        if term.basis.is_some() {
            return Err(format!("basis symbol must be the last factor in {body:?}"));
        }
        if f.starts_with(|c: char| c.is_ascii_digit()) {
            let r = parse_rational(f).ok_or_else(|| format!("bad number {f:?}"))?;
            term.coeff *= r;
            continue;
        }
        let (name, exp) = match f.split_once('^') {
            Some((n, e)) => (n, Some(e)),
            None => (*f, None),
        };
        if name == "t" {
            if !sym.allow_t {
                return Err("t is not allowed here".into());
            }
            let q = match exp {
                Some(e) => parse_exponent(e).ok_or_else(|| format!("bad exponent {e:?}"))?,
                None => Rational::one(),
            };
            term.t_exp += q;
        } else if Some(name) == sym.param {
            let k = match exp {
                Some(e) => e.parse::<u32>().map_err(|_| format!("bad parameter power {e:?}"))?,
                None => 1,
            };
            term.param_power += k;
        } else if let Some(b) = Basis::parse(name).filter(|_| exp.is_none()) {
            if !sym.want_basis {
                return Err(format!("unexpected basis symbol {name}"));
            }
            if i + 1 != factors.len() {
                return Err(format!("basis symbol must be the last factor in {body:?}"));
            }
            term.basis = Some(b);
        } else {
            return Err(format!("undeclared symbol {name:?}"));
        }
    }
    if sym.want_basis && term.basis.is_none() {
        return Err(format!("term {body:?} has no basis symbol"));
    }
    if neg {
        term.coeff = -term.coeff;
    }
    Ok(term)
}

impl Expr {
    pub fn parse(s: &str, sym: &Symbols<'_>) -> Result<Self, String> {
        let terms = split_terms(s)?
            .into_iter()
            .map(|(neg, body)| parse_term(neg, &body, sym))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { terms })
    }

    /// Least common multiple of the denominators of all `t` exponents.
    pub fn exponent_lcm(&self) -> u32 {
        self.terms.iter().fold(1u32, |acc, t| {
            let d = t.t_exp.denom().to_u32().unwrap_or(1);
            acc.lcm(&d)
        })
    }

    /// Coefficient of `basis` (or the scalar value, for `None`) after `t := s^scale`.
    pub fn coefficient(&self, basis: Option<Basis>, scale: u32) -> Scalar {
        let mut acc = Scalar::zero();
        for t in self.terms.iter().filter(|t| t.basis == basis) {
            let e = &t.t_exp * Rational::from_integer(scale.into());
            assert!(e.is_integer(), "exponent not cleared by scale");
            let exp = e.to_integer().to_i32().expect("small exponent");
            let mono = LaurentPoly::monomial(t.coeff.clone(), (exp, t.param_power as i32));
            acc = acc.add(&Scalar::from_poly(mono));
        }
        acc
    }

    pub fn bases(&self) -> Vec<Basis> {
        let mut v: Vec<Basis> = self.terms.iter().filter_map(|t| t.basis).collect();
        v.sort();
        v.dedup();
        v
    }
}

fn fmt_t_exp(q: &Rational) -> String {
    if q.is_one() {
        "t".into()
    } else if q.is_integer() {
        format!("t^{}", q.numer())
    } else {
        format!("t^({})", fmt_rational(q))
    }
}

impl Term {
    fn fmt_body(&self, f: &mut fmt::Formatter<'_>, param: &str) -> fmt::Result {
        let abs = self.coeff.abs();
        let mut parts: Vec<String> = Vec::new();
        let bare = self.t_exp.is_zero() && self.param_power == 0 && self.basis.is_none();
        if !abs.is_one() || bare {
            parts.push(fmt_rational(&abs));
        }
        if !self.t_exp.is_zero() {
            parts.push(fmt_t_exp(&self.t_exp));
        }
        match self.param_power {
            0 => {}
            1 => parts.push(param.to_string()),
            k => parts.push(format!("{param}^{k}")),
        }
        if let Some(b) = self.basis {
            parts.push(b.to_string());
        }
        f.write_str(&parts.join("*"))
    }
}

/// Display adapter that knows the parameter name.
pub struct ExprDisplay<'a> {
    pub expr: &'a Expr,
    pub param: &'a str,
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.expr.terms.iter().enumerate() {
            let neg = is_neg(&t.coeff);
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            t.fmt_body(f, self.param)?;
        }
        Ok(())
    }
}
