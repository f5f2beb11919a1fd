//! Polynomial gcd over `Q[p][t]`, used to keep rational functions reduced.
//!
//! Univariate polynomials in `p` are dense coefficient vectors (lowest degree
//! first); bivariate ones are dense vectors of those, indexed by the `t` degree.
//! The bivariate gcd is the primitive pseudo-remainder sequence over `Q[p]`
//! with contents split off by Gauss' lemma.

use num_traits::{One, Zero};

use super::laurent::LaurentPoly;
use super::rational::Rational;

pub(crate) type QPoly = Vec<Rational>;
pub(crate) type BPoly = Vec<QPoly>;

fn trim(p: &mut QPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn q_is_zero(p: &QPoly) -> bool {
    p.is_empty()
}

fn q_add(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.len().max(b.len());
    let mut out: QPoly = (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x + y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => Rational::zero(),
        })
        .collect();
    trim(&mut out);
    out
}

fn q_neg(a: &QPoly) -> QPoly {
    a.iter().map(|c| -c).collect()
}

fn q_sub(a: &QPoly, b: &QPoly) -> QPoly {
    q_add(a, &q_neg(b))
}

fn q_mul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn q_scale(a: &QPoly, c: &Rational) -> QPoly {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|x| x * c).collect()
}

fn q_divrem(a: &QPoly, d: &QPoly) -> (QPoly, QPoly) {
    assert!(!d.is_empty(), "polynomial division by zero");
    let mut r = a.clone();
    if r.len() < d.len() {
        return (Vec::new(), r);
    }
    let dl = d.len() - 1;
    let lc_inv = d[dl].recip();
    let mut q = vec![Rational::zero(); r.len() - dl];
    while r.len() > dl && !r.is_empty() {
        let shift = r.len() - 1 - dl;
        let c = &r[r.len() - 1] * &lc_inv;
        for (i, dc) in d.iter().enumerate() {
            r[shift + i] -= &c * dc;
        }
        q[shift] = c;
        // the leading coefficient is now exactly zero
        r.pop();
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

fn q_monic(a: &QPoly) -> QPoly {
    match a.last() {
        None => Vec::new(),
        Some(lc) => q_scale(a, &lc.recip()),
    }
}

fn q_gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let (_, r) = q_divrem(&x, &y);
        x = y;
        y = r;
    }
    q_monic(&x)
}

fn q_div_exact(a: &QPoly, d: &QPoly) -> QPoly {
    let (q, r) = q_divrem(a, d);
    debug_assert!(r.is_empty(), "inexact division in Q[p]");
    q
}

fn b_trim(p: &mut BPoly) {
    while p.last().is_some_and(|c| c.is_empty()) {
        p.pop();
    }
}

/// Converts a polynomial with nonnegative exponents.
pub(crate) fn to_bpoly(p: &LaurentPoly) -> BPoly {
    let mut out: BPoly = Vec::new();
    for ((a, b), c) in p.terms() {
        debug_assert!(*a >= 0 && *b >= 0);
        let (a, b) = (*a as usize, *b as usize);
        if out.len() <= a {
            out.resize(a + 1, Vec::new());
        }
        if out[a].len() <= b {
            out[a].resize(b + 1, Rational::zero());
        }
        out[a][b] = c.clone();
    }
    b_trim(&mut out);
    out
}

pub(crate) fn from_bpoly(p: &BPoly) -> LaurentPoly {
    LaurentPoly::from_terms(p.iter().enumerate().flat_map(|(a, q)| {
        q.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(b, c)| ((a as i32, b as i32), c.clone()))
    }))
}

fn content(p: &BPoly) -> QPoly {
    let mut g: QPoly = Vec::new();
    for c in p {
        if q_is_zero(c) {
            continue;
        }
        g = q_gcd(&g, c);
        if g.len() == 1 {
            break;
        }
    }
    g
}

fn div_content(p: &BPoly, c: &QPoly) -> BPoly {
    p.iter().map(|x| if x.is_empty() { Vec::new() } else { q_div_exact(x, c) }).collect()
}

fn primitive_part(p: &BPoly) -> BPoly {
    let c = content(p);
    if c.len() == 1 && c[0].is_one() {
        return p.clone();
    }
    div_content(p, &c)
}

/// Pseudo-remainder of `a` by `b` in `t`.
fn prem(a: &BPoly, b: &BPoly) -> BPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lcb = &b[db];
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let lcr = r[r.len() - 1].clone();
        for c in r.iter_mut() {
            *c = q_mul(c, lcb);
        }
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] = q_sub(&r[shift + i], &q_mul(&lcr, bc));
        }
        b_trim(&mut r);
    }
    r
}

/// Gcd in `Q[t, p]` of two nonzero polynomials, up to a rational unit.
pub(crate) fn bpoly_gcd(a: &BPoly, b: &BPoly) -> BPoly {
    if a.is_empty() {
        return b.clone();
    }
    if b.is_empty() {
        return a.clone();
    }
    let (ca, cb) = (content(a), content(b));
    let c = q_gcd(&ca, &cb);
    let (mut x, mut y) = (div_content(a, &ca), div_content(b, &cb));
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        let r = prem(&x, &y);
        x = y;
        y = if r.is_empty() { r } else { primitive_part(&r) };
    }
    let g = primitive_part(&x);
    g.iter().map(|q| q_mul(q, &c)).collect()
}

/// Exact quotient `a / d` in `Q[p][t]`; the caller guarantees divisibility.
pub(crate) fn bpoly_div_exact(a: &BPoly, d: &BPoly) -> BPoly {
    let mut r = a.clone();
    let dd = d.len() - 1;
    let lcd = &d[dd];
    let mut q: BPoly = vec![Vec::new(); r.len().saturating_sub(dd).max(1)];
    while r.len() > dd && !r.is_empty() {
        let shift = r.len() - 1 - dd;
        let c = q_div_exact(&r[r.len() - 1], lcd);
        for (i, dc) in d.iter().enumerate() {
            r[shift + i] = q_sub(&r[shift + i], &q_mul(&c, dc));
        }
        q[shift] = c;
        b_trim(&mut r);
    }
    debug_assert!(r.is_empty(), "inexact division in Q[t,p]");
    b_trim(&mut q);
    q
}

pub(crate) fn is_constant(p: &BPoly) -> bool {
    p.len() == 1 && p[0].len() == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational::int;

    fn lp(terms: &[((i32, i32), i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|(e, c)| (*e, int(*c))))
    }

    #[test]
    fn gcd_of_shared_bivariate_factor() {
        // (t + p)(t - 1) and (t + p)(p + 2)
        let f = lp(&[((1, 0), 1), ((0, 1), 1)]);
        let a = f.mul(&lp(&[((1, 0), 1), ((0, 0), -1)]));
        let b = f.mul(&lp(&[((0, 1), 1), ((0, 0), 2)]));
        let g = from_bpoly(&bpoly_gcd(&to_bpoly(&a), &to_bpoly(&b)));
        // unit ambiguity: compare after dividing out
        let q = bpoly_div_exact(&to_bpoly(&g), &to_bpoly(&f));
        assert!(is_constant(&q));
    }

    #[test]
    fn coprime_inputs_give_constant_gcd() {
        let a = lp(&[((2, 0), 1), ((0, 0), 1)]);
        let b = lp(&[((1, 0), 1), ((0, 1), 1)]);
        assert!(is_constant(&bpoly_gcd(&to_bpoly(&a), &to_bpoly(&b))));
    }

    #[test]
    fn exact_division_recovers_cofactor() {
        let a = lp(&[((1, 1), 2), ((0, 0), 3)]);
        let b = lp(&[((3, 0), 1), ((0, 2), -1), ((1, 0), 5)]);
        let prod = a.mul(&b);
        let q = from_bpoly(&bpoly_div_exact(&to_bpoly(&prod), &to_bpoly(&b)));
        assert_eq!(q, a);
    }
}
