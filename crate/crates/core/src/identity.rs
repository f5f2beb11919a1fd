//! Supercommutativity, the Jordan superidentity and auxiliary multilinear
//! identities, checked on homogeneous basis elements.

use std::fmt;

use thiserror::Error;

use crate::algebra::{Basis, GradedVector, Parity, ProductTable, SuperAlgebra};
use crate::exec::Exec;
use crate::scalar::rational::{fmt_rational, is_neg, parse_rational};
use crate::scalar::{Rational, Scalar};

pub fn check_supercommutativity(j: &SuperAlgebra) -> bool {
    let (m, n) = j.kind();
    let c_sym = (0..m).all(|a| (0..m).all(|b| (0..m).all(|k| j.c(a, b, k) == j.c(b, a, k))));
    let g_skew = (0..n).all(|a| {
        (0..n).all(|b| (0..m).all(|k| j.gamma(a, b, k) == &j.gamma(b, a, k).neg()))
    });
    c_sym && g_skew
}

fn sign(bit: u8) -> Scalar {
    if bit.is_multiple_of(2) {
        Scalar::one()
    } else {
        Scalar::from_int(-1)
    }
}

fn axpy(acc: &mut [Scalar], coeff: &Scalar, v: &[Scalar]) {
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a = a.add(&coeff.mul(x));
        }
    }
}

/// `J^s(w;x,y,z)` on basis indices of `table`, as a dense vector.
pub fn jordan_superidentity_value(t: &ProductTable, w: usize, x: usize, y: usize, z: usize) -> Vec<Scalar> {
    let p = |a: usize| t.parity(a).bit();
    let (pw, px, py, pz) = (p(w), p(x), p(y), p(z));
    let u = |a: usize| t.unit(a);
    let prod = |a: usize, b: usize| t.mul(&u(a), &u(b));
    let (wx, wy, wz) = (prod(w, x), prod(w, y), prod(w, z));
    let (xy, xz, yz) = (prod(x, y), prod(x, z), prod(y, z));
    let mut out = vec![Scalar::zero(); t.dim()];
    axpy(&mut out, &Scalar::one(), &t.mul(&wx, &yz));
    axpy(&mut out, &sign(px * py), &t.mul(&wy, &xz));
    axpy(&mut out, &sign((px + py) * pz), &t.mul(&wz, &xy));
    axpy(&mut out, &sign(pw * px).neg(), &t.mul_basis_vec(x, &t.mul_basis_vec(w, &yz)));
    axpy(&mut out, &sign(py * (pw + px)).neg(), &t.mul_basis_vec(y, &t.mul_basis_vec(w, &xz)));
    axpy(&mut out, &sign(pz * (pw + px + py)).neg(), &t.mul_basis_vec(z, &t.mul_basis_vec(w, &xy)));
    out
}

/// Failing basis quadruple `(w; x, y, z)` with the value of `J^s` there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub w: Basis,
    pub x: Basis,
    pub y: Basis,
    pub z: Basis,
    pub value: GradedVector,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "J^s({};{},{},{}) = {}", self.w, self.x, self.y, self.z, self.value)
    }
}

/// Checks `J^s = 0` over all basis quadruples; returns the
/// lexicographically first failure.
pub fn check_jordan_superidentity(j: &SuperAlgebra, exec: Exec) -> Result<(), Counterexample> {
    let t = j.table();
    let d = j.dim();
    let m = j.even_dim();
    let hit = exec.find_first(d * d * d * d, |q| {
        let (w, x, y, z) = (q / (d * d * d), (q / (d * d)) % d, (q / d) % d, q % d);
        let v = jordan_superidentity_value(&t, w, x, y, z);
        if v.iter().all(Scalar::is_zero) {
            None
        } else {
            Some(Counterexample {
                w: Basis::from_index(w, m),
                x: Basis::from_index(x, m),
                y: Basis::from_index(y, m),
                z: Basis::from_index(z, m),
                value: GradedVector::from_dense(&v, m),
            })
        }
    });
    match hit {
        Some(c) => Err(c),
        None => Ok(()),
    }
}

pub fn associator(t: &ProductTable, a: usize, b: usize, c: usize) -> Vec<Scalar> {
    let left = t.mul(&t.mul(&t.unit(a), &t.unit(b)), &t.unit(c));
    let right = t.mul_basis_vec(a, &t.mul(&t.unit(b), &t.unit(c)));
    left.iter().zip(&right).map(|(l, r)| l.sub(r)).collect()
}

pub fn check_associativity(j: &SuperAlgebra) -> bool {
    let t = j.table();
    let d = j.dim();
    (0..d).all(|a| (0..d).all(|b| (0..d).all(|c| associator(&t, a, b, c).iter().all(Scalar::is_zero))))
}

/// The unsigned linearized Jordan identity together with ordinary
/// commutativity: `J` is a Jordan algebra when the grading is forgotten.
pub fn check_ordinary_jordan(j: &SuperAlgebra) -> bool {
    let t = j.table();
    let d = j.dim();
    let commutative = (0..d).all(|a| (0..d).all(|b| t.basis_product(a, b) == t.basis_product(b, a)));
    if !commutative {
        return false;
    }
    let u = |a: usize| t.unit(a);
    (0..d).all(|w| {
        (0..d).all(|x| {
            (0..d).all(|y| {
                (0..d).all(|z| {
                    let prod = |a: usize, b: usize| t.mul(&u(a), &u(b));
                    let mut out = vec![Scalar::zero(); d];
                    let one = Scalar::one();
                    let minus = Scalar::from_int(-1);
                    axpy(&mut out, &one, &t.mul(&prod(w, x), &prod(y, z)));
                    axpy(&mut out, &one, &t.mul(&prod(w, y), &prod(x, z)));
                    axpy(&mut out, &one, &t.mul(&prod(w, z), &prod(x, y)));
                    axpy(&mut out, &minus, &t.mul_basis_vec(x, &t.mul_basis_vec(w, &prod(y, z))));
                    axpy(&mut out, &minus, &t.mul_basis_vec(y, &t.mul_basis_vec(w, &prod(x, z))));
                    axpy(&mut out, &minus, &t.mul_basis_vec(z, &t.mul_basis_vec(w, &prod(x, y))));
                    out.iter().all(Scalar::is_zero)
                })
            })
        })
    })
}

/// A variable slot: `x_i` is even, `y_i` is odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub parity: Parity,
    pub index: usize,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.parity {
            Parity::Even => 'x',
            Parity::Odd => 'y',
        };
        write!(f, "{c}{}", self.index)
    }
}

/// Fully parenthesized product tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GradedMonomial {
    Var(Var),
    Mul(Box<GradedMonomial>, Box<GradedMonomial>),
}

impl GradedMonomial {
    pub fn vars(&self) -> Vec<Var> {
        match self {
            GradedMonomial::Var(v) => vec![*v],
            GradedMonomial::Mul(a, b) => {
                let mut out = a.vars();
                out.extend(b.vars());
                out
            }
        }
    }

    fn eval(&self, t: &ProductTable, assign: &dyn Fn(Var) -> usize) -> Vec<Scalar> {
        match self {
            GradedMonomial::Var(v) => t.unit(assign(*v)),
            GradedMonomial::Mul(a, b) => t.mul(&a.eval(t, assign), &b.eval(t, assign)),
        }
    }

    fn fmt_inner(&self, f: &mut fmt::Formatter<'_>, top: bool) -> fmt::Result {
        match self {
            GradedMonomial::Var(v) => write!(f, "{v}"),
            GradedMonomial::Mul(a, b) => {
                if !top {
                    f.write_str("(")?;
                }
                a.fmt_inner(f, false)?;
                f.write_str("*")?;
                b.fmt_inner(f, false)?;
                if !top {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for GradedMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_inner(f, true)
    }
}

/// Rational combination of multilinear monomials in the same variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedPolynomial {
    terms: Vec<(Rational, GradedMonomial)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityParseError {
    #[error("unexpected character {0:?} at offset {1}")]
    Unexpected(char, usize),
    #[error("unexpected end of input")]
    Eof,
    #[error("variable {0} occurs more than once in a monomial")]
    NotMultilinear(String),
    #[error("monomials use different variables")]
    MixedVariables,
    #[error("bad number {0:?}")]
    Number(String),
}

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), IdentityParseError> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => Err(IdentityParseError::Unexpected(x as char, self.pos)),
            None => Err(IdentityParseError::Eof),
        }
    }

    fn number(&mut self) -> Result<Rational, IdentityParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_digit() || self.s[self.pos] == b'/') {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or_default();
        parse_rational(text).ok_or_else(|| IdentityParseError::Number(text.to_string()))
    }

    fn factor(&mut self) -> Result<GradedMonomial, IdentityParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.product()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c @ (b'x' | b'y')) => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or_default();
                let index: usize = digits.parse().map_err(|_| IdentityParseError::Number(digits.into()))?;
                let parity = if c == b'x' { Parity::Even } else { Parity::Odd };
                Ok(GradedMonomial::Var(Var { parity, index }))
            }
            Some(c) => Err(IdentityParseError::Unexpected(c as char, self.pos)),
            None => Err(IdentityParseError::Eof),
        }
    }

    // left-associative chain of `*`
    fn product(&mut self) -> Result<GradedMonomial, IdentityParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = GradedMonomial::Mul(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<(Rational, GradedMonomial), IdentityParseError> {
        let coeff = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let r = self.number()?;
            self.expect(b'*')?;
            r
        } else {
            Rational::from_integer(1.into())
        };
        Ok((coeff, self.product()?))
    }
}

impl GradedPolynomial {
    pub fn monomial(m: GradedMonomial) -> Self {
        Self { terms: vec![(Rational::from_integer(1.into()), m)] }
    }

    pub fn terms(&self) -> &[(Rational, GradedMonomial)] {
        &self.terms
    }

    pub fn parse(s: &str) -> Result<Self, IdentityParseError> {
        let mut lx = Lexer { s: s.as_bytes(), pos: 0 };
        let mut terms = Vec::new();
        let mut negate = false;
        if lx.peek() == Some(b'-') {
            lx.pos += 1;
            negate = true;
        }
        loop {
            let (c, m) = lx.term()?;
            terms.push((if negate { -c } else { c }, m));
            match lx.peek() {
                None => break,
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                Some(c) => return Err(IdentityParseError::Unexpected(c as char, lx.pos)),
            }
            lx.pos += 1;
        }
        let poly = Self { terms };
        poly.validate()?;
        Ok(poly)
    }

    fn validate(&self) -> Result<(), IdentityParseError> {
        let mut reference: Option<Vec<Var>> = None;
        for (_, m) in &self.terms {
            let mut vars = m.vars();
            vars.sort();
            if let Some(w) = vars.windows(2).find(|w| w[0] == w[1]) {
                return Err(IdentityParseError::NotMultilinear(w[0].to_string()));
            }
            match &reference {
                None => reference = Some(vars),
                Some(r) if *r != vars => return Err(IdentityParseError::MixedVariables),
                _ => {}
            }
        }
        Ok(())
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut v = self.terms.first().map(|(_, m)| m.vars()).unwrap_or_default();
        v.sort();
        v
    }

    /// True iff the polynomial vanishes on every assignment of homogeneous
    /// basis elements of matching parity to its variables.
    pub fn holds_in(&self, j: &SuperAlgebra) -> bool {
        let t = j.table();
        let (m, n) = j.kind();
        let vars = self.vars();
        let ranges: Vec<Vec<usize>> = vars
            .iter()
            .map(|v| match v.parity {
                Parity::Even => (0..m).collect(),
                Parity::Odd => (m..m + n).collect(),
            })
            .collect();
        if ranges.iter().any(Vec::is_empty) {
            return true;
        }
        let mut idx = vec![0usize; vars.len()];
        loop {
            let assign = |v: Var| {
                let pos = vars.iter().position(|w| *w == v).expect("declared variable");
                ranges[pos][idx[pos]]
            };
            let mut acc = vec![Scalar::zero(); t.dim()];
            for (c, mono) in &self.terms {
                axpy(&mut acc, &Scalar::from_rational(c.clone()), &mono.eval(&t, &assign));
            }
            if acc.iter().any(|s| !s.is_zero()) {
                return false;
            }
            // odometer over assignments
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return true;
                }
                idx[k] += 1;
                if idx[k] < ranges[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
}

impl fmt::Display for GradedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, m)) in self.terms.iter().enumerate() {
            let neg = is_neg(c);
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = if neg { -c } else { c.clone() };
            if abs != Rational::from_integer(1.into()) {
                write!(f, "{}*", fmt_rational(&abs))?;
            }
            // a top-level product needs brackets once a coefficient is attached
            if abs != Rational::from_integer(1.into()) && matches!(m, GradedMonomial::Mul(..)) {
                write!(f, "(")?;
                write!(f, "{m}")?;
                write!(f, ")")?;
            } else {
                write!(f, "{m}")?;
            }
        }
        Ok(())
    }
}

/// Identity used as a non-degeneration invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Identity {
    Polynomial(GradedPolynomial),
    /// Ordinary (ungraded) Jordan algebra axioms.
    OrdinaryJordan,
}

impl Identity {
    pub fn parse(s: &str) -> Result<Self, IdentityParseError> {
        if s.trim() == "ordinary_jordan" {
            Ok(Identity::OrdinaryJordan)
        } else {
            GradedPolynomial::parse(s).map(Identity::Polynomial)
        }
    }

    pub fn holds_in(&self, j: &SuperAlgebra) -> bool {
        match self {
            Identity::Polynomial(p) => p.holds_in(j),
            Identity::OrdinaryJordan => check_ordinary_jordan(j),
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Identity::Polynomial(p) => write!(f, "{p}"),
            Identity::OrdinaryJordan => f.write_str("ordinary_jordan"),
        }
    }
}

pub fn check_graded_identity(j: &SuperAlgebra, p: &GradedPolynomial) -> bool {
    p.holds_in(j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Block;

    fn e(i: usize) -> Basis {
        Basis::E(i - 1)
    }
    fn f(j: usize) -> Basis {
        Basis::F(j - 1)
    }

    fn build(m: usize, n: usize, prods: &[(Basis, Basis, Basis)]) -> SuperAlgebra {
        let mut b = SuperAlgebra::builder(m, n);
        for (x, y, z) in prods {
            b = b.product(*x, *y, &[(*z, Scalar::one())]).unwrap();
        }
        b.build()
    }

    #[test]
    fn zero_algebra_passes_everything() {
        let z = SuperAlgebra::zero(4, 1);
        assert!(check_supercommutativity(&z));
        assert!(check_jordan_superidentity(&z, Exec::Sequential).is_ok());
        assert!(check_associativity(&z));
    }

    #[test]
    fn symmetric_gamma_violates_supercommutativity() {
        let mut j = build(1, 4, &[(f(1), f(2), e(1))]);
        j.set(Block::Gamma, 1, 0, 0, Scalar::one());
        assert!(!check_supercommutativity(&j));
    }

    #[test]
    fn rejected_point_has_expected_witness() {
        let j = build(1, 4, &[(e(1), f(2), f(1)), (e(1), f(3), f(2)), (e(1), f(4), f(3))]);
        let c = check_jordan_superidentity(&j, Exec::Sequential).unwrap_err();
        assert_eq!((c.w, c.x, c.y, c.z), (e(1), e(1), e(1), f(4)));
        assert_eq!(c.value, GradedVector::basis(1, 4, f(1)).scale(&Scalar::from_int(-2)));
        assert_eq!(check_jordan_superidentity(&j, Exec::Parallel).unwrap_err(), c);
    }

    #[test]
    fn associativity_of_small_entries() {
        let a = build(1, 4, &[(e(1), f(2), f(1)), (e(1), f(4), f(3))]);
        assert!(check_associativity(&a));
        let mut b = SuperAlgebra::builder(1, 4)
            .product(e(1), f(2), &[(f(1), Scalar::one())])
            .unwrap()
            .product(f(2), f(3), &[(e(1), Scalar::one())])
            .unwrap()
            .build();
        assert!(!check_associativity(&b));
        b = b.a_functor();
        assert!(check_associativity(&b));
    }

    #[test]
    fn graded_identity_parse_and_print() {
        for s in ["(y1*y2)*x1", "(x1*y1)*y2", "(y1*y2)*y3", "x1*(x2*x3) - (x1*x2)*x3", "2*(x1*x2) - 1/2*(x2*x1)"] {
            let p = GradedPolynomial::parse(s).unwrap();
            assert_eq!(GradedPolynomial::parse(&p.to_string()).unwrap(), p, "{s}");
        }
        assert!(matches!(GradedPolynomial::parse("x1*x1"), Err(IdentityParseError::NotMultilinear(_))));
        assert!(matches!(GradedPolynomial::parse("x1*x2 - x1*x3"), Err(IdentityParseError::MixedVariables)));
    }

    #[test]
    fn graded_identity_on_zero_algebra() {
        let p = GradedPolynomial::parse("(x1*y1)*y2").unwrap();
        assert!(p.holds_in(&SuperAlgebra::zero(3, 2)));
    }

    #[test]
    fn ordinary_jordan_needs_commutativity() {
        let j = build(1, 4, &[(f(1), f(2), e(1))]);
        assert!(!check_ordinary_jordan(&j));
        assert!(check_ordinary_jordan(&j.f_functor()));
    }
}
