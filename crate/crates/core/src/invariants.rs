//! Invariants of a superalgebra that are monotone along degenerations:
//! powers, annihilator, associative center, derivations, functors.

use std::fmt;

use thiserror::Error;

use crate::algebra::{ProductTable, SuperAlgebra};
use crate::identity::{associator, check_associativity};
use crate::scalar::{Matrix, Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct GradedDims {
    pub even: usize,
    pub odd: usize,
}

impl GradedDims {
    pub fn new(even: usize, odd: usize) -> Self {
        Self { even, odd }
    }

    pub fn get(&self, parity: usize) -> usize {
        if parity == 0 {
            self.even
        } else {
            self.odd
        }
    }

    pub fn is_zero(&self) -> bool {
        self.even == 0 && self.odd == 0
    }
}

impl fmt::Display for GradedDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.even, self.odd)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("power filtration of {name} stabilizes at {dims}")]
    NotNilpotent { name: String, dims: GradedDims },
}

/// Row-reduced basis of the span of `vectors` (all of length `dim`).
fn span(vectors: Vec<Vec<Scalar>>, dim: usize) -> Vec<Vec<Scalar>> {
    let vectors: Vec<Vec<Scalar>> = vectors.into_iter().filter(|v| v.iter().any(|s| !s.is_zero())).collect();
    if vectors.is_empty() || dim == 0 {
        return Vec::new();
    }
    let (r, pivots) = Matrix::from_rows(vectors).rref();
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

/// A graded subspace given by homogeneous basis vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSubspace {
    pub even: Vec<Vec<Scalar>>,
    pub odd: Vec<Vec<Scalar>>,
}

impl GradedSubspace {
    pub fn dims(&self) -> GradedDims {
        GradedDims::new(self.even.len(), self.odd.len())
    }

    fn whole(t: &ProductTable) -> Self {
        let m = t.even_dim();
        Self {
            even: (0..m).map(|a| t.unit(a)).collect(),
            odd: (m..t.dim()).map(|a| t.unit(a)).collect(),
        }
    }

    fn vectors(&self) -> impl Iterator<Item = &Vec<Scalar>> {
        self.even.iter().chain(self.odd.iter())
    }
}

fn is_even_vector(v: &[Scalar], m: usize) -> bool {
    v[m..].iter().all(Scalar::is_zero)
}

/// Span of `A·B` for graded subspaces.
fn product_space(t: &ProductTable, a: &GradedSubspace, b: &GradedSubspace) -> (Vec<Vec<Scalar>>, Vec<Vec<Scalar>>) {
    let m = t.even_dim();
    let (mut ev, mut od) = (Vec::new(), Vec::new());
    for u in a.vectors() {
        for v in b.vectors() {
            let w = t.mul(u, v);
            if w.iter().all(Scalar::is_zero) {
                continue;
            }
            if is_even_vector(&w, m) {
                ev.push(w);
            } else {
                od.push(w);
            }
        }
    }
    (ev, od)
}

/// `J^1 ⊇ J^2 ⊇ …` under `J^{k+1} = Σ_i J^{k+1-i} J^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerFiltration {
    /// `dims[k-1]` is the graded dimension of `J^k`, down to the first zero power.
    pub dims: Vec<GradedDims>,
    pub nilindex: usize,
}

impl PowerFiltration {
    /// Graded dimension of `J^k` (zero past the nilindex).
    pub fn power(&self, k: usize) -> GradedDims {
        self.dims.get(k.saturating_sub(1)).copied().unwrap_or_default()
    }
}

pub fn power_filtration(j: &SuperAlgebra) -> Result<PowerFiltration, InvariantError> {
    let t = j.table();
    let d = t.dim();
    let mut powers = vec![GradedSubspace::whole(&t)];
    loop {
        let k = powers.len();
        let current = powers[k - 1].dims();
        if current.is_zero() {
            return Ok(PowerFiltration { dims: powers.iter().map(GradedSubspace::dims).collect(), nilindex: k });
        }
        let (mut ev, mut od) = (Vec::new(), Vec::new());
        for i in 1..=k {
            let (e, o) = product_space(&t, &powers[k - i], &powers[i - 1]);
            ev.extend(e);
            od.extend(o);
        }
        let next = GradedSubspace { even: span(ev, d), odd: span(od, d) };
        // J^k = J^{k+1} happens in nilpotent algebras too, so bound the length instead
        if k > 4 * d + 4 {
            return Err(InvariantError::NotNilpotent { name: j.name().to_string(), dims: current });
        }
        powers.push(next);
    }
}

/// `Ann(J)` with its graded dimension and a reduced basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annihilator {
    pub dims: GradedDims,
    pub basis: GradedSubspace,
}

fn kernel_dims(rows_per_unknown: Vec<Vec<Scalar>>) -> Vec<Vec<Scalar>> {
    // columns are the unknowns
    let unknowns = rows_per_unknown.len();
    if unknowns == 0 {
        return Vec::new();
    }
    let eqs = rows_per_unknown[0].len();
    if eqs == 0 {
        return (0..unknowns)
            .map(|i| (0..unknowns).map(|k| if k == i { Scalar::one() } else { Scalar::zero() }).collect())
            .collect();
    }
    let a = Matrix::from_fn(eqs, unknowns, |r, c| rows_per_unknown[c][r].clone());
    a.nullspace()
}

pub fn annihilator(j: &SuperAlgebra) -> Annihilator {
    let t = j.table();
    let (m, d) = (t.even_dim(), t.dim());
    let part = |range: std::ops::Range<usize>| -> Vec<Vec<Scalar>> {
        let idx: Vec<usize> = range.collect();
        // column for unknown a: concatenated products a·b over all basis b
        let cols: Vec<Vec<Scalar>> = idx.iter().map(|&a| (0..d).flat_map(|b| t.mul(&t.unit(a), &t.unit(b))).collect()).collect();
        kernel_dims(cols)
            .into_iter()
            .map(|coeffs| {
                let mut v = vec![Scalar::zero(); d];
                for (c, &a) in coeffs.iter().zip(&idx) {
                    v[a] = c.clone();
                }
                v
            })
            .collect()
    };
    let basis = GradedSubspace { even: part(0..m), odd: part(m..d) };
    Annihilator { dims: basis.dims(), basis }
}

/// Graded dimension of `Z(J) = {a : (a,J,J) = (J,a,J) = (J,J,a) = 0}`.
pub fn assoc_center(j: &SuperAlgebra) -> GradedDims {
    let t = j.table();
    let (m, d) = (t.even_dim(), t.dim());
    let part = |range: std::ops::Range<usize>| -> usize {
        let cols: Vec<Vec<Scalar>> = range
            .map(|a| {
                let mut col = Vec::new();
                for b in 0..d {
                    for c in 0..d {
                        col.extend(associator(&t, a, b, c));
                        col.extend(associator(&t, b, a, c));
                        col.extend(associator(&t, b, c, a));
                    }
                }
                col
            })
            .collect();
        kernel_dims(cols).len()
    };
    GradedDims::new(part(0..m), part(m..d))
}

/// Dimension of the space of even derivations, equal to `dim Aut(J)`.
pub fn even_derivation_dim(j: &SuperAlgebra) -> usize {
    let t = j.table();
    let (m, d) = (t.even_dim(), t.dim());
    // unknowns D_{il}: coefficient of b_i in D(b_l), same parity only
    let unknowns: Vec<(usize, usize)> = (0..d)
        .flat_map(|l| (0..d).map(move |i| (i, l)))
        .filter(|&(i, l)| (i < m) == (l < m))
        .collect();
    let n_unknowns = unknowns.len();
    if n_unknowns == 0 {
        return 0;
    }
    let col_of = |i: usize, l: usize| unknowns.iter().position(|&u| u == (i, l)).expect("graded unknown");
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for a in 0..d {
        for b in 0..d {
            let mut eq = vec![vec![Scalar::zero(); n_unknowns]; d];
            // D(ab)
            for (l, coeff) in t.basis_product(a, b) {
                for i in 0..d {
                    if (i < m) == (*l < m) {
                        let c = col_of(i, *l);
                        eq[i][c] = eq[i][c].add(coeff);
                    }
                }
            }
            // - D(a) b
            for i in (0..d).filter(|&i| (i < m) == (a < m)) {
                let c = col_of(i, a);
                for (k, coeff) in t.basis_product(i, b) {
                    eq[*k][c] = eq[*k][c].sub(coeff);
                }
            }
            // - a D(b)
            for i in (0..d).filter(|&i| (i < m) == (b < m)) {
                let c = col_of(i, b);
                for (k, coeff) in t.basis_product(a, i) {
                    eq[*k][c] = eq[*k][c].sub(coeff);
                }
            }
            rows.extend(eq.into_iter().filter(|r| r.iter().any(|s| !s.is_zero())));
        }
    }
    if rows.is_empty() {
        return n_unknowns;
    }
    n_unknowns - Matrix::from_rows(rows).rank()
}

pub fn orbit_dim(j: &SuperAlgebra) -> usize {
    let (m, n) = j.kind();
    m * m + n * n - even_derivation_dim(j)
}

/// Aggregate of the invariants above.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantFingerprint {
    pub nilindex: usize,
    pub power_dims: Vec<GradedDims>,
    pub ann: GradedDims,
    pub center: GradedDims,
    pub der_even_dim: usize,
    pub orbit_dim: usize,
    pub associative: bool,
    pub a_fingerprint: Option<Box<InvariantFingerprint>>,
    pub f_fingerprint: Option<Box<InvariantFingerprint>>,
}

pub fn fingerprint(j: &SuperAlgebra) -> Result<InvariantFingerprint, InvariantError> {
    fingerprint_at_depth(j, 1)
}

fn fingerprint_at_depth(j: &SuperAlgebra, depth: usize) -> Result<InvariantFingerprint, InvariantError> {
    let pf = power_filtration(j)?;
    let der = even_derivation_dim(j);
    let (m, n) = j.kind();
    let sub = |alg: SuperAlgebra| -> Result<Option<Box<InvariantFingerprint>>, InvariantError> {
        if depth == 0 {
            Ok(None)
        } else {
            Ok(Some(Box::new(fingerprint_at_depth(&alg, depth - 1)?)))
        }
    };
    Ok(InvariantFingerprint {
        nilindex: pf.nilindex,
        power_dims: pf.dims.into_iter().skip(1).collect(),
        ann: annihilator(j).dims,
        center: assoc_center(j),
        der_even_dim: der,
        orbit_dim: m * m + n * n - der,
        associative: check_associativity(j),
        a_fingerprint: sub(j.a_functor())?,
        f_fingerprint: sub(j.f_functor())?,
    })
}

/// The table columns Obs / nilindex / Aut / Ann.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub associative: bool,
    pub nilindex: usize,
    pub aut: usize,
    pub ann: GradedDims,
}

impl fmt::Display for TableRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let obs = if self.associative { "A" } else { "NA" };
        write!(f, "{obs} {} {} {}", self.nilindex, self.aut, self.ann)
    }
}

pub fn table_row(j: &SuperAlgebra) -> Result<TableRow, InvariantError> {
    Ok(TableRow {
        associative: check_associativity(j),
        nilindex: power_filtration(j)?.nilindex,
        aut: even_derivation_dim(j),
        ann: annihilator(j).dims,
    })
}

/// First `count` admissible sample values for a family parameter.
pub fn sample_parameters(j: &SuperAlgebra, count: usize) -> Vec<Rational> {
    let candidates = [(2, 1), (-1, 1), (3, 1), (1, 3), (-2, 1), (5, 2), (7, 1), (-3, 4)];
    let Some(param) = j.param() else { return Vec::new() };
    candidates
        .iter()
        .map(|&(n, d)| Rational::new(n.into(), d.into()))
        .filter(|r| param.admits(r))
        .take(count)
        .collect()
}
