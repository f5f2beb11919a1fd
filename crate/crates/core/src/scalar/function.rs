use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gcd;
use super::laurent::LaurentPoly;
use super::rational::Rational;
use super::{PoleError, ScalarError};

/// Element of `Q(t, p)`: a quotient of Laurent polynomials kept in canonical form.
///
/// Canonical form: the denominator is an honest polynomial divisible by
/// neither `t` nor `p`, it is coprime to the numerator, and its leading
/// coefficient (largest exponent pair) is 1. Equal field elements therefore
/// have identical representations and `==` is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: LaurentPoly,
    den: LaurentPoly,
}

/// Gcd up to units (nonzero constants times monomials), as a polynomial
/// divisible by neither `t` nor `p`.
fn poly_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() || b.is_zero() || a.is_monomial() || b.is_monomial() {
        return LaurentPoly::one();
    }
    let g = gcd::bpoly_gcd(&gcd::to_bpoly(&shift_out(a)), &gcd::to_bpoly(&shift_out(b)));
    if gcd::is_constant(&g) {
        LaurentPoly::one()
    } else {
        gcd::from_bpoly(&g)
    }
}

fn shift_out(a: &LaurentPoly) -> LaurentPoly {
    let (x, y) = a.min_exp().expect("nonzero");
    a.mul_monomial(&Rational::one(), (-x, -y))
}

/// `a / d` for a polynomial divisor `d` of `a` without monomial factors.
fn div_exact(a: &LaurentPoly, d: &LaurentPoly) -> LaurentPoly {
    if d.is_one() {
        return a.clone();
    }
    let (x, y) = a.min_exp().expect("nonzero");
    let q = gcd::bpoly_div_exact(&gcd::to_bpoly(&shift_out(a)), &gcd::to_bpoly(d));
    gcd::from_bpoly(&q).mul_monomial(&Rational::one(), (x, y))
}

impl Scalar {
    pub fn zero() -> Self {
        Self { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    pub fn from_rational(r: Rational) -> Self {
        Self { num: LaurentPoly::constant(r), den: LaurentPoly::one() }
    }

    pub fn from_poly(num: LaurentPoly) -> Self {
        Self { num, den: LaurentPoly::one() }
    }

    /// The degeneration variable `t`.
    pub fn t() -> Self {
        Self::t_pow(1)
    }

    pub fn t_pow(e: i32) -> Self {
        Self::from_poly(LaurentPoly::monomial(Rational::one(), (e, 0)))
    }

    /// The formal family parameter `p`.
    pub fn p() -> Self {
        Self::from_poly(LaurentPoly::monomial(Rational::one(), (0, 1)))
    }

    /// Builds `num / den` and reduces it.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = poly_gcd(&num, &den);
        Self::normalized(div_exact(&num, &g), div_exact(&den, &g))
    }

    /// Canonical form of a fraction that is already reduced up to units:
    /// denominator free of monomial factors with leading coefficient 1.
    fn normalized(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (ta, pa) = den.min_exp().expect("nonzero denominator");
        let one = Rational::one();
        let den = den.mul_monomial(&one, (-ta, -pa));
        let num = num.mul_monomial(&one, (-ta, -pa));
        if let Some(c) = den.as_constant() {
            return Self { num: num.scale(&c.recip()), den: LaurentPoly::one() };
        }
        let lc = den.leading().expect("nonzero").1.recip();
        Self { num: num.scale(&lc), den: den.scale(&lc) }
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// `Some(r)` when the element is a rational constant.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn has_t(&self) -> bool {
        self.num.has_t() || self.den.has_t()
    }

    pub fn has_p(&self) -> bool {
        self.num.has_p() || self.den.has_p()
    }

    pub fn neg(&self) -> Self {
        Self { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(self.num.add(&other.num));
        }
        // n1/d1 + n2/d2 with g = gcd(d1, d2): only g can share a factor with the new numerator
        let g = poly_gcd(&self.den, &other.den);
        let (d1, d2) = (div_exact(&self.den, &g), div_exact(&other.den, &g));
        let num = self.num.mul(&d2).add(&other.num.mul(&d1));
        if num.is_zero() {
            return Self::zero();
        }
        let h = poly_gcd(&num, &g);
        Self::normalized(div_exact(&num, &h), d1.mul(&div_exact(&other.den, &h)))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(self.num.mul(&other.num));
        }
        // both factors are reduced, so only cross cancellation is possible
        let g1 = poly_gcd(&self.num, &other.den);
        let g2 = poly_gcd(&other.num, &self.den);
        let num = div_exact(&self.num, &g1).mul(&div_exact(&other.num, &g2));
        let den = div_exact(&self.den, &g2).mul(&div_exact(&other.den, &g1));
        Self::normalized(num, den)
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ScalarError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i32) -> Result<Self, ScalarError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Value at `t = 0` as an element of `Q(p)`, or a pole.
    pub fn eval_at_zero(&self) -> Result<Self, PoleError> {
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let min_t = self.num.terms().iter().map(|((a, _), _)| *a).min().unwrap_or(0);
        if min_t < 0 {
            return Err(PoleError { order: -min_t });
        }
        // the canonical denominator is not divisible by t, so den(0, p) != 0
        let n0 = self.num.t_coefficient(0);
        let d0 = self.den.t_coefficient(0);
        Ok(Self::reduce(n0, d0))
    }

    /// The substitution `t := t^factor`, used to clear fractional exponents.
    pub fn rescale_t(&self, factor: u32) -> Self {
        assert!(factor >= 1, "rescale factor must be positive");
        let f = factor as i32;
        Self::reduce(self.num.map_t_exponents(f), self.den.map_t_exponents(f))
    }

    /// Replaces the family parameter `p` by `value`.
    pub fn substitute_p(&self, value: &Self) -> Result<Self, ScalarError> {
        if !self.has_p() {
            return Ok(self.clone());
        }
        let n = subst_poly(&self.num, value)?;
        let d = subst_poly(&self.den, value)?;
        n.checked_div(&d)
    }

    pub fn specialize_p(&self, value: &Rational) -> Result<Self, ScalarError> {
        self.substitute_p(&Self::from_rational(value.clone()))
    }

    /// Exact value at a rational point; `None` at a pole.
    pub fn eval(&self, t: &Rational, p: &Rational) -> Option<Rational> {
        let d = self.den.eval(t, p)?;
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(t, p)? / d)
    }

    pub fn eval_f64(&self, t: f64, p: f64) -> f64 {
        self.num.eval_f64(t, p) / self.den.eval_f64(t, p)
    }
}

fn subst_poly(poly: &LaurentPoly, value: &Scalar) -> Result<Scalar, ScalarError> {
    let mut acc = Scalar::zero();
    for b in poly.p_exponents() {
        let coeff = Scalar::from_poly(poly.p_coefficient(b));
        acc = acc.add(&coeff.mul(&value.pow(b)?));
    }
    Ok(acc)
}

impl Default for Scalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        Scalar::add(self, rhs)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        Scalar::sub(self, rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        Scalar::mul(self, rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational::{int, rat};

    fn lp(terms: &[((i32, i32), i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|(e, c)| (*e, int(*c))))
    }

    #[test]
    fn rational_sum() {
        let a = Scalar::from_rational(rat(1, 2));
        let b = Scalar::from_rational(rat(1, 3));
        assert_eq!(a.add(&b), Scalar::from_rational(rat(5, 6)));
    }

    #[test]
    fn laurent_cancellation() {
        assert!(Scalar::t_pow(-1).mul(&Scalar::t()).is_one());
    }

    #[test]
    fn monomial_factor_cancels() {
        let pt = Scalar::p().mul(&Scalar::t());
        assert_eq!(pt.checked_div(&Scalar::t()).unwrap(), Scalar::p());
    }

    #[test]
    fn common_polynomial_factor_cancels() {
        // (t^2 - 1) / (t - 1) = t + 1
        let s = Scalar::new(lp(&[((2, 0), 1), ((0, 0), -1)]), lp(&[((1, 0), 1), ((0, 0), -1)])).unwrap();
        assert_eq!(s, Scalar::from_poly(lp(&[((1, 0), 1), ((0, 0), 1)])));
    }

    #[test]
    fn denominator_is_monic() {
        let s = Scalar::new(LaurentPoly::one(), lp(&[((1, 0), 2), ((0, 0), 4)])).unwrap();
        assert_eq!(s.denominator(), &LaurentPoly::from_terms([((1, 0), int(1)), ((0, 0), int(2))]));
        assert_eq!(s.numerator(), &LaurentPoly::constant(rat(1, 2)));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(Scalar::one().checked_div(&Scalar::zero()), Err(ScalarError::DivisionByZero));
        assert!(Scalar::zero().inv().is_err());
    }

    #[test]
    fn eval_at_zero_examples() {
        let s = Scalar::from_poly(lp(&[((2, 0), 1), ((0, 0), 3)]));
        assert_eq!(s.eval_at_zero().unwrap(), Scalar::from_int(3));
        assert_eq!(Scalar::t_pow(-1).eval_at_zero(), Err(PoleError { order: 1 }));
        // (t p + t^2) / t -> p
        let s = Scalar::new(lp(&[((1, 1), 1), ((2, 0), 1)]), lp(&[((1, 0), 1)])).unwrap();
        assert_eq!(s.eval_at_zero().unwrap(), Scalar::p());
        // 1 / (1 + t) -> 1
        let s = Scalar::new(LaurentPoly::one(), lp(&[((1, 0), 1), ((0, 0), 1)])).unwrap();
        assert_eq!(s.eval_at_zero().unwrap(), Scalar::one());
    }

    #[test]
    fn rescale_clears_exponents() {
        assert_eq!(Scalar::t().rescale_t(2), Scalar::t_pow(2));
        let s = Scalar::t_pow(3).sub(&Scalar::t());
        assert_eq!(s.rescale_t(2), Scalar::t_pow(6).sub(&Scalar::t_pow(2)));
    }

    #[test]
    fn substitution_of_parameter() {
        // p / (p + 1) at p := t^-1  ->  1 / (1 + t)
        let s = Scalar::p().checked_div(&Scalar::p().add(&Scalar::one())).unwrap();
        let got = s.substitute_p(&Scalar::t_pow(-1)).unwrap();
        let want = Scalar::one().checked_div(&Scalar::one().add(&Scalar::t())).unwrap();
        assert_eq!(got, want);
        assert!(Scalar::one().checked_div(&Scalar::p()).unwrap().specialize_p(&int(0)).is_err());
    }
}
