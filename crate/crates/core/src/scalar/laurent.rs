use std::fmt;

use num_traits::{One, Zero};

use super::rational::{fmt_rational, is_neg, Rational};

/// Exponent pair `(a, b)` of the monomial `t^a p^b`.
pub type Exp = (i32, i32);

/// Laurent polynomial in `t` and `p` with rational coefficients.
///
/// Terms are kept sorted by exponent pair (lexicographic, `t` first) and no
/// stored coefficient is zero, so equal polynomials are structurally equal.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: Vec<(Exp, Rational)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, (0, 0))
    }

    pub fn monomial(c: Rational, exp: Exp) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Self { terms: vec![(exp, c)] }
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms<I: IntoIterator<Item = (Exp, Rational)>>(terms: I) -> Self {
        let mut v: Vec<(Exp, Rational)> = terms.into_iter().collect();
        v.sort_by_key(|a| a.0);
        let mut out: Vec<(Exp, Rational)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Self { terms: out }
    }

    pub fn terms(&self) -> &[(Exp, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == (0, 0) && self.terms[0].1.is_one()
    }

    /// The value if this is a constant (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [((0, 0), c)] => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Term with the largest exponent pair.
    pub fn leading(&self) -> Option<&(Exp, Rational)> {
        self.terms.last()
    }

    /// Componentwise minimum exponent over all terms.
    pub fn min_exp(&self) -> Option<Exp> {
        let mut it = self.terms.iter();
        let first = it.next()?.0;
        Some(it.fold(first, |(a, b), ((x, y), _)| (a.min(*x), b.min(*y))))
    }

    pub fn has_t(&self) -> bool {
        self.terms.iter().any(|((a, _), _)| *a != 0)
    }

    pub fn has_p(&self) -> bool {
        self.terms.iter().any(|((_, b), _)| *b != 0)
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Self { terms: out }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let [(e, c)] = other.terms.as_slice() {
            return self.mul_monomial(c, *e);
        }
        if let [(e, c)] = self.terms.as_slice() {
            return other.mul_monomial(c, *e);
        }
        let mut v = Vec::with_capacity(self.terms.len() * other.terms.len());
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                v.push(((a1 + a2, b1 + b2), c1 * c2));
            }
        }
        Self::from_terms(v)
    }

    pub fn mul_monomial(&self, c: &Rational, (da, db): Exp) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|((a, b), x)| ((a + da, b + db), x * c))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.mul_monomial(c, (0, 0))
    }

    /// Multiplies every `t` exponent by `factor` (the substitution `t := t^factor`).
    pub fn map_t_exponents(&self, factor: i32) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|((a, b), c)| ((a * factor, *b), c.clone())),
        )
    }

    /// Part of the polynomial whose `t` exponent equals `a`, as a polynomial in `p`.
    pub fn t_coefficient(&self, a: i32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|((x, _), _)| *x == a)
                .map(|((_, b), c)| ((0, *b), c.clone()))
                .collect(),
        }
    }

    /// Part of the polynomial whose `p` exponent equals `b`, as a polynomial in `t`.
    pub fn p_coefficient(&self, b: i32) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((_, y), _)| *y == b)
                .map(|((a, _), c)| ((*a, 0), c.clone())),
        )
    }

    pub fn p_exponents(&self) -> Vec<i32> {
        let mut v: Vec<i32> = self.terms.iter().map(|((_, b), _)| *b).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Exact evaluation; `None` when a negative power of zero occurs.
    pub fn eval(&self, t: &Rational, p: &Rational) -> Option<Rational> {
        let mut acc = Rational::zero();
        for ((a, b), c) in &self.terms {
            acc += c * pow(t, *a)? * pow(p, *b)?;
        }
        Some(acc)
    }

    pub fn eval_f64(&self, t: f64, p: f64) -> f64 {
        self.terms
            .iter()
            .map(|((a, b), c)| super::rational::to_f64(c) * t.powi(*a) * p.powi(*b))
            .sum()
    }
}

fn pow(x: &Rational, e: i32) -> Option<Rational> {
    if e >= 0 {
        Some(num_traits::pow(x.clone(), e as usize))
    } else if x.is_zero() {
        None
    } else {
        Some(num_traits::pow(x.recip(), (-e) as usize))
    }
}

fn fmt_var(f: &mut fmt::Formatter<'_>, name: &str, e: i32, first: &mut bool) -> fmt::Result {
    if e == 0 {
        return Ok(());
    }
    if !*first {
        f.write_str("*")?;
    }
    *first = false;
    if e == 1 {
        write!(f, "{name}")
    } else {
        write!(f, "{name}^{e}")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // highest terms first, as people write polynomials
        for (i, ((a, b), c)) in self.terms.iter().rev().enumerate() {
            let neg = is_neg(c);
            let abs = if neg { -c } else { c.clone() };
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut first = true;
            if !abs.is_one() || (*a, *b) == (0, 0) {
                f.write_str(&fmt_rational(&abs))?;
                first = false;
            }
            fmt_var(f, "t", *a, &mut first)?;
            fmt_var(f, "p", *b, &mut first)?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational::{int, rat};

    fn t() -> LaurentPoly {
        LaurentPoly::monomial(int(1), (1, 0))
    }

    #[test]
    fn cancellation_removes_terms() {
        let a = t().add(&LaurentPoly::one());
        let b = a.sub(&t());
        assert_eq!(b, LaurentPoly::one());
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn inverse_monomials_multiply_to_one() {
        let tinv = LaurentPoly::monomial(int(1), (-1, 0));
        assert!(tinv.mul(&t()).is_one());
    }

    #[test]
    fn display_is_readable() {
        let p = LaurentPoly::from_terms([((2, 0), int(3)), ((0, 1), rat(-1, 2)), ((-1, 0), int(1))]);
        assert_eq!(p.to_string(), "3*t^2 - 1/2*p + t^-1");
    }

    #[test]
    fn evaluation_rejects_negative_power_of_zero() {
        let tinv = LaurentPoly::monomial(int(1), (-1, 0));
        assert_eq!(tinv.eval(&int(0), &int(1)), None);
        assert_eq!(tinv.eval(&int(2), &int(1)), Some(rat(1, 2)));
    }
}
