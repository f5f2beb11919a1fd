//! Structure-constant representation of superalgebras of type `(m, n)` and
//! the change-of-basis action of `GL_m × GL_n`.
//!
//! The homogeneous basis is `e1..em, f1..fn`. Internally a single index runs
//! over the whole basis, even vectors first: index `a < m` is `e_{a+1}` and
//! index `m + j` is `f_{j+1}`.

use std::fmt;

use thiserror::Error;

use crate::scalar::{Field, Matrix, MatrixError, Rational, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected type {expected:?}, got {got:?}")]
    Dimension { expected: (usize, usize), got: (usize, usize) },
    #[error("basis change is singular")]
    SingularChange,
    #[error("product {0} assigned twice")]
    DuplicateProduct(String),
    #[error("parity violation in product {0}")]
    Parity(String),
    #[error("product {0} contradicts supercommutativity")]
    Supercommutativity(String),
    #[error("parameter value {value} is excluded for {name}")]
    ExcludedParameter { name: String, value: Rational },
    #[error("algebra has no family parameter")]
    NoParameter,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

impl From<MatrixError> for AlgebraError {
    fn from(_: MatrixError) -> Self {
        AlgebraError::SingularChange
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn sum(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// A homogeneous basis element: `E(i)` is `e_{i+1}`, `F(j)` is `f_{j+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    E(usize),
    F(usize),
}

impl Basis {
    pub fn parity(self) -> Parity {
        match self {
            Basis::E(_) => Parity::Even,
            Basis::F(_) => Parity::Odd,
        }
    }

    pub fn index(self, m: usize) -> usize {
        match self {
            Basis::E(i) => i,
            Basis::F(j) => m + j,
        }
    }

    pub fn from_index(a: usize, m: usize) -> Basis {
        if a < m {
            Basis::E(a)
        } else {
            Basis::F(a - m)
        }
    }

    /// Parses `e1`, `f3`, ...
    pub fn parse(s: &str) -> Option<Basis> {
        let s = s.trim();
        let (kind, num) = s.split_at(s.char_indices().nth(1).map_or(s.len(), |(i, _)| i));
        let k: usize = num.parse().ok()?;
        if k == 0 {
            return None;
        }
        match kind {
            "e" => Some(Basis::E(k - 1)),
            "f" => Some(Basis::F(k - 1)),
            _ => None,
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::E(i) => write!(f, "e{}", i + 1),
            Basis::F(j) => write!(f, "f{}", j + 1),
        }
    }
}

/// The declared family parameter of a catalog entry and its excluded values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub excluded: Vec<Rational>,
}

impl Param {
    pub fn admits(&self, value: &Rational) -> bool {
        !self.excluded.contains(value)
    }
}

/// Sparse multiplication table over the full basis.
#[derive(Debug, Clone)]
pub struct ProductTable {
    m: usize,
    dim: usize,
    entries: Vec<Vec<(usize, Scalar)>>,
}

impl ProductTable {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn even_dim(&self) -> usize {
        self.m
    }

    pub fn parity(&self, a: usize) -> Parity {
        if a < self.m {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn basis_product(&self, a: usize, b: usize) -> &[(usize, Scalar)] {
        &self.entries[a * self.dim + b]
    }

    /// Bilinear product of two dense coordinate vectors.
    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let entries = self.basis_product(a, b);
                if entries.is_empty() {
                    continue;
                }
                let coeff = xa.mul(yb);
                for (k, c) in entries {
                    out[*k] = out[*k].add(&coeff.mul(c));
                }
            }
        }
        out
    }

    pub fn mul_basis_vec(&self, a: usize, y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim];
        for (b, yb) in y.iter().enumerate() {
            if yb.is_zero() {
                continue;
            }
            for (k, c) in self.basis_product(a, b) {
                out[*k] = out[*k].add(&yb.mul(c));
            }
        }
        out
    }

    pub fn unit(&self, a: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim];
        v[a] = Scalar::one();
        v
    }
}

/// A vector split into its even and odd coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedVector {
    pub even: Vec<Scalar>,
    pub odd: Vec<Scalar>,
}

/// Homogeneity of a [`GradedVector`]. The zero vector counts as even.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorParity {
    Even,
    Odd,
    Mixed,
}

impl GradedVector {
    pub fn zero(m: usize, n: usize) -> Self {
        Self { even: vec![Scalar::zero(); m], odd: vec![Scalar::zero(); n] }
    }

    pub fn basis(m: usize, n: usize, b: Basis) -> Self {
        let mut v = Self::zero(m, n);
        match b {
            Basis::E(i) => v.even[i] = Scalar::one(),
            Basis::F(j) => v.odd[j] = Scalar::one(),
        }
        v
    }

    pub fn from_dense(v: &[Scalar], m: usize) -> Self {
        Self { even: v[..m].to_vec(), odd: v[m..].to_vec() }
    }

    pub fn to_dense(&self) -> Vec<Scalar> {
        self.even.iter().chain(self.odd.iter()).cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.even.iter().chain(self.odd.iter()).all(Scalar::is_zero)
    }

    pub fn parity(&self) -> VectorParity {
        let e = self.even.iter().any(|x| !x.is_zero());
        let o = self.odd.iter().any(|x| !x.is_zero());
        match (e, o) {
            (true, true) => VectorParity::Mixed,
            (false, true) => VectorParity::Odd,
            _ => VectorParity::Even,
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self {
            even: self.even.iter().map(|x| x.mul(s)).collect(),
            odd: self.odd.iter().map(|x| x.mul(s)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            even: self.even.iter().zip(&other.even).map(|(a, b)| a.add(b)).collect(),
            odd: self.odd.iter().zip(&other.odd).map(|(a, b)| a.add(b)).collect(),
        }
    }
}

impl fmt::Display for GradedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.even.len();
        let mut first = true;
        for (a, c) in self.even.iter().chain(self.odd.iter()).enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let b = Basis::from_index(a, m);
            match c.to_rational() {
                _ if c.is_one() => write!(f, "{b}")?,
                Some(r) => write!(f, "{}*{b}", crate::scalar::rational::fmt_rational(&r))?,
                None => write!(f, "({c})*{b}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Which block of structure constants an entry belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    /// `e_i e_j = Σ c_ij^k e_k`
    C,
    /// `e_i f_j = Σ ρ_ij^k f_k`
    Rho,
    /// `f_i f_j = Σ Γ_ij^k e_k`
    Gamma,
}

/// One structure constant that differs between two algebras.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantDiff {
    pub block: Block,
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub left: Scalar,
    pub right: Scalar,
}

impl fmt::Display for ConstantDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.block {
            Block::C => "c",
            Block::Rho => "rho",
            Block::Gamma => "Gamma",
        };
        write!(f, "{name}[{},{}->{}]: {} vs {}", self.i + 1, self.j + 1, self.k + 1, self.left, self.right)
    }
}

/// Superalgebra of type `(m, n)` given by structure constants over `Q(t, p)`.
#[derive(Clone, PartialEq, Eq)]
pub struct SuperAlgebra {
    name: String,
    m: usize,
    n: usize,
    c: Vec<Scalar>,
    rho: Vec<Scalar>,
    gamma: Vec<Scalar>,
    param: Option<Param>,
}

impl SuperAlgebra {
    pub fn zero(m: usize, n: usize) -> Self {
        Self {
            name: format!("zero({m},{n})"),
            m,
            n,
            c: vec![Scalar::zero(); m * m * m],
            rho: vec![Scalar::zero(); m * n * n],
            gamma: vec![Scalar::zero(); n * n * m],
            param: None,
        }
    }

    pub fn builder(m: usize, n: usize) -> SuperAlgebraBuilder {
        SuperAlgebraBuilder { alg: Self::zero(m, n), assigned: Vec::new() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn kind(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn even_dim(&self) -> usize {
        self.m
    }

    pub fn odd_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.m + self.n
    }

    pub fn param(&self) -> Option<&Param> {
        self.param.as_ref()
    }

    pub fn with_param(mut self, param: Option<Param>) -> Self {
        self.param = param;
        self
    }

    /// True when some structure constant depends on the family parameter.
    pub fn is_family(&self) -> bool {
        self.constants().any(|(_, _, _, _, s)| s.has_p())
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.c[(i * self.m + j) * self.m + k]
    }

    pub fn rho(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.rho[(i * self.n + j) * self.n + k]
    }

    pub fn gamma(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.gamma[(i * self.n + j) * self.m + k]
    }

    pub(crate) fn set(&mut self, block: Block, i: usize, j: usize, k: usize, v: Scalar) {
        let (m, n) = (self.m, self.n);
        match block {
            Block::C => self.c[(i * m + j) * m + k] = v,
            Block::Rho => self.rho[(i * n + j) * n + k] = v,
            Block::Gamma => self.gamma[(i * n + j) * m + k] = v,
        }
    }

    /// Every stored constant as `(block, i, j, k, value)`.
    pub fn constants(&self) -> impl Iterator<Item = (Block, usize, usize, usize, &Scalar)> + '_ {
        let (m, n) = (self.m, self.n);
        let c = self.c.iter().enumerate().map(move |(x, s)| (Block::C, x / (m * m), (x / m) % m, x % m, s));
        let r = self.rho.iter().enumerate().map(move |(x, s)| (Block::Rho, x / (n * n), (x / n) % n, x % n, s));
        let g = self.gamma.iter().enumerate().map(move |(x, s)| (Block::Gamma, x / (n * m), (x / m) % n, x % m, s));
        c.chain(r).chain(g)
    }

    pub fn map_constants(&self, mut f: impl FnMut(Block, &Scalar) -> Result<Scalar, ScalarError>) -> Result<Self, ScalarError> {
        Ok(Self {
            name: self.name.clone(),
            m: self.m,
            n: self.n,
            c: self.c.iter().map(|s| f(Block::C, s)).collect::<Result<_, _>>()?,
            rho: self.rho.iter().map(|s| f(Block::Rho, s)).collect::<Result<_, _>>()?,
            gamma: self.gamma.iter().map(|s| f(Block::Gamma, s)).collect::<Result<_, _>>()?,
            param: self.param.clone(),
        })
    }

    /// Basis product `b_a b_b` as sparse coordinates over the full basis.
    pub fn basis_product(&self, a: usize, b: usize) -> Vec<(usize, Scalar)> {
        let m = self.m;
        let nz = |it: Vec<(usize, Scalar)>| it.into_iter().filter(|(_, s)| !s.is_zero()).collect();
        match (a < m, b < m) {
            (true, true) => nz((0..m).map(|k| (k, self.c(a, b, k).clone())).collect()),
            (true, false) => nz((0..self.n).map(|k| (m + k, self.rho(a, b - m, k).clone())).collect()),
            // f_j e_i = e_i f_j
            (false, true) => nz((0..self.n).map(|k| (m + k, self.rho(b, a - m, k).clone())).collect()),
            (false, false) => nz((0..m).map(|k| (k, self.gamma(a - m, b - m, k).clone())).collect()),
        }
    }

    pub fn table(&self) -> ProductTable {
        let dim = self.dim();
        let mut entries = Vec::with_capacity(dim * dim);
        for a in 0..dim {
            for b in 0..dim {
                entries.push(self.basis_product(a, b));
            }
        }
        ProductTable { m: self.m, dim, entries }
    }

    /// Product of graded vectors.
    pub fn product(&self, x: &GradedVector, y: &GradedVector) -> Result<GradedVector, AlgebraError> {
        for v in [x, y] {
            if v.even.len() != self.m || v.odd.len() != self.n {
                return Err(AlgebraError::Dimension { expected: self.kind(), got: (v.even.len(), v.odd.len()) });
            }
        }
        let out = self.table().mul(&x.to_dense(), &y.to_dense());
        Ok(GradedVector::from_dense(&out, self.m))
    }

    pub fn product_basis(&self, a: Basis, b: Basis) -> GradedVector {
        let (m, n) = (self.m, self.n);
        self.product(&GradedVector::basis(m, n, a), &GradedVector::basis(m, n, b))
            .expect("basis vectors have the right shape")
    }

    /// Structure constants in the basis `{T e_k, S f_l}`.
    pub fn apply_basis_change(&self, g: &BasisChange) -> Result<Self, AlgebraError> {
        if g.kind() != self.kind() {
            return Err(AlgebraError::Dimension { expected: self.kind(), got: g.kind() });
        }
        let (m, n) = (self.m, self.n);
        let dim = m + n;
        let table = self.table();
        // columns of the block matrix as sparse vectors
        let cols: Vec<Vec<(usize, Scalar)>> = (0..dim)
            .map(|a| {
                let col: Vec<(usize, Scalar)> = if a < m {
                    (0..m).map(|i| (i, g.t[(i, a)].clone())).collect()
                } else {
                    (0..n).map(|i| (m + i, g.s[(i, a - m)].clone())).collect()
                };
                col.into_iter().filter(|(_, s)| !s.is_zero()).collect()
            })
            .collect();
        let mut out = Self::zero(m, n).with_name(self.name.clone()).with_param(self.param.clone());
        for a in 0..dim {
            for b in 0..dim {
                // only the blocks that are stored
                if a >= m && b < m {
                    continue;
                }
                let mut v = vec![Scalar::zero(); dim];
                for (x, px) in &cols[a] {
                    for (y, py) in &cols[b] {
                        let entries = table.basis_product(*x, *y);
                        if entries.is_empty() {
                            continue;
                        }
                        let coeff = px.mul(py);
                        for (k, ck) in entries {
                            v[*k] = v[*k].add(&coeff.mul(ck));
                        }
                    }
                }
                if v.iter().all(Scalar::is_zero) {
                    continue;
                }
                match (a < m, b < m) {
                    (true, true) => {
                        let w = g.t_inv.mul_vec(&v[..m]);
                        for (k, s) in w.into_iter().enumerate() {
                            out.set(Block::C, a, b, k, s);
                        }
                    }
                    (true, false) => {
                        let w = g.s_inv.mul_vec(&v[m..]);
                        for (k, s) in w.into_iter().enumerate() {
                            out.set(Block::Rho, a, b - m, k, s);
                        }
                    }
                    (false, false) => {
                        let w = g.t_inv.mul_vec(&v[..m]);
                        for (k, s) in w.into_iter().enumerate() {
                            out.set(Block::Gamma, a - m, b - m, k, s);
                        }
                    }
                    (false, true) => unreachable!(),
                }
            }
        }
        Ok(out)
    }

    /// `true` iff `g` carries `self` onto `other` with bit-exact constants.
    pub fn verify_iso_certificate(&self, other: &Self, g: &BasisChange) -> Result<bool, AlgebraError> {
        if self.kind() != other.kind() {
            return Err(AlgebraError::Dimension { expected: self.kind(), got: other.kind() });
        }
        Ok(self.apply_basis_change(g)?.same_constants(other))
    }

    pub fn same_constants(&self, other: &Self) -> bool {
        self.kind() == other.kind() && self.c == other.c && self.rho == other.rho && self.gamma == other.gamma
    }

    pub fn diff(&self, other: &Self) -> Vec<ConstantDiff> {
        self.constants()
            .zip(other.constants())
            .filter(|((_, _, _, _, a), (_, _, _, _, b))| a != b)
            .map(|((block, i, j, k, a), (_, _, _, _, b))| ConstantDiff { block, i, j, k, left: a.clone(), right: b.clone() })
            .collect()
    }

    /// Replaces the family parameter by `value` (an expression in `t` or a constant).
    pub fn substitute_param(&self, value: &Scalar) -> Result<Self, AlgebraError> {
        let mut out = self.map_constants(|_, s| s.substitute_p(value))?;
        out.param = None;
        Ok(out)
    }

    /// Specializes the family parameter, rejecting excluded values.
    pub fn specialize(&self, value: &Rational) -> Result<Self, AlgebraError> {
        let param = self.param.as_ref().ok_or(AlgebraError::NoParameter)?;
        if !param.admits(value) {
            return Err(AlgebraError::ExcludedParameter { name: param.name.clone(), value: value.clone() });
        }
        self.substitute_param(&Scalar::from_rational(value.clone()))
    }

    /// Keeps only the odd-odd products (`Γ`).
    pub fn a_functor(&self) -> Self {
        let mut out = self.clone();
        out.c.iter_mut().chain(out.rho.iter_mut()).for_each(|s| *s = Scalar::zero());
        out.name = format!("a({})", self.name);
        out
    }

    /// Keeps only the products with an even factor (`c`, `ρ`).
    pub fn f_functor(&self) -> Self {
        let mut out = self.clone();
        out.gamma.iter_mut().for_each(|s| *s = Scalar::zero());
        out.name = format!("F({})", self.name);
        out
    }

    /// The even part as a superalgebra of type `(m, 0)`.
    pub fn even_part(&self) -> Self {
        Self {
            name: format!("{}_0", self.name),
            m: self.m,
            n: 0,
            c: self.c.clone(),
            rho: Vec::new(),
            gamma: Vec::new(),
            param: if self.c.iter().any(Scalar::has_p) { self.param.clone() } else { None },
        }
    }
}

impl fmt::Debug for SuperAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SuperAlgebra {} ({},{}) {{", self.name, self.m, self.n)?;
        for (a, b, v) in self.nonzero_products() {
            write!(f, " {a}{b}={v};")?;
        }
        write!(f, " }}")
    }
}

impl SuperAlgebra {
    /// Nonzero products `b_a b_b` with `a ≤ b`.
    pub fn nonzero_products(&self) -> Vec<(Basis, Basis, GradedVector)> {
        let mut out = Vec::new();
        for a in 0..self.dim() {
            for b in a..self.dim() {
                let p = self.basis_product(a, b);
                if p.is_empty() {
                    continue;
                }
                let mut v = vec![Scalar::zero(); self.dim()];
                for (k, s) in p {
                    v[k] = s;
                }
                out.push((Basis::from_index(a, self.m), Basis::from_index(b, self.m), GradedVector::from_dense(&v, self.m)));
            }
        }
        out
    }
}

/// Assembles a superalgebra from its nonzero products, applying the
/// symmetric (even) and skew (odd-odd) closure.
pub struct SuperAlgebraBuilder {
    alg: SuperAlgebra,
    assigned: Vec<(Basis, Basis)>,
}

impl SuperAlgebraBuilder {
    pub fn name(mut self, name: impl Into<String>) -> Self {
        self.alg.name = name.into();
        self
    }

    pub fn param(mut self, param: Param) -> Self {
        self.alg.param = Some(param);
        self
    }

    /// Sets `a * b = Σ coeff · basis` together with the product `b * a` forced
    /// by supercommutativity.
    pub fn product(mut self, a: Basis, b: Basis, terms: &[(Basis, Scalar)]) -> Result<Self, AlgebraError> {
        let label = format!("{a}*{b}");
        let (m, n) = self.alg.kind();
        for x in [a, b] {
            let ok = match x {
                Basis::E(i) => i < m,
                Basis::F(j) => j < n,
            };
            if !ok {
                return Err(AlgebraError::Dimension { expected: (m, n), got: (m, n) });
            }
        }
        let key = if a <= b { (a, b) } else { (b, a) };
        if self.assigned.contains(&key) {
            return Err(AlgebraError::DuplicateProduct(label));
        }
        self.assigned.push(key);
        let target = a.parity().sum(b.parity());
        let mut coords = vec![Scalar::zero(); m.max(n)];
        for (basis, coeff) in terms {
            if basis.parity() != target {
                return Err(AlgebraError::Parity(label));
            }
            let k = match *basis {
                Basis::E(k) if k < m => k,
                Basis::F(k) if k < n => k,
                _ => return Err(AlgebraError::Dimension { expected: (m, n), got: (m, n) }),
            };
            coords[k] = coords[k].add(coeff);
        }
        match (a, b) {
            (Basis::E(i), Basis::E(j)) => {
                for k in 0..m {
                    self.alg.set(Block::C, i, j, k, coords[k].clone());
                    self.alg.set(Block::C, j, i, k, coords[k].clone());
                }
            }
            (Basis::E(i), Basis::F(j)) | (Basis::F(j), Basis::E(i)) => {
                for k in 0..n {
                    self.alg.set(Block::Rho, i, j, k, coords[k].clone());
                }
            }
            (Basis::F(i), Basis::F(j)) => {
                if i == j {
                    if coords[..m].iter().any(|s| !s.is_zero()) {
                        return Err(AlgebraError::Supercommutativity(label));
                    }
                } else {
                    for k in 0..m {
                        self.alg.set(Block::Gamma, i, j, k, coords[k].clone());
                        self.alg.set(Block::Gamma, j, i, k, coords[k].neg());
                    }
                }
            }
        }
        Ok(self)
    }

    pub fn build(self) -> SuperAlgebra {
        self.alg
    }
}

/// An invertible graded change of basis `(T, S)`; column `k` of `T` holds the
/// coordinates of the new `e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisChange {
    t: Matrix<Scalar>,
    s: Matrix<Scalar>,
    t_inv: Matrix<Scalar>,
    s_inv: Matrix<Scalar>,
}

impl BasisChange {
    pub fn new(t: Matrix<Scalar>, s: Matrix<Scalar>) -> Result<Self, AlgebraError> {
        let t_inv = if t.rows() == 0 { t.clone() } else { t.inverse()? };
        let s_inv = if s.rows() == 0 { s.clone() } else { s.inverse()? };
        Ok(Self { t, s, t_inv, s_inv })
    }

    pub fn identity(m: usize, n: usize) -> Self {
        Self::new(Matrix::identity(m), Matrix::identity(n)).expect("identity is invertible")
    }

    /// Builds the change from the new basis vectors written in the old basis.
    pub fn from_vectors(evens: &[GradedVector], odds: &[GradedVector]) -> Result<Self, AlgebraError> {
        let m = evens.len();
        let n = odds.len();
        if evens.iter().any(|v| v.parity() == VectorParity::Odd || v.parity() == VectorParity::Mixed)
            || odds.iter().any(|v| v.parity() != VectorParity::Odd && !v.is_zero())
        {
            return Err(AlgebraError::Parity("basis change".into()));
        }
        let t = Matrix::from_fn(m, m, |i, k| evens[k].even[i].clone());
        let s = Matrix::from_fn(n, n, |i, k| odds[k].odd[i].clone());
        Self::new(t, s)
    }

    pub fn kind(&self) -> (usize, usize) {
        (self.t.rows(), self.s.rows())
    }

    pub fn t(&self) -> &Matrix<Scalar> {
        &self.t
    }

    pub fn s(&self) -> &Matrix<Scalar> {
        &self.s
    }

    pub fn inverse(&self) -> Self {
        Self { t: self.t_inv.clone(), s: self.s_inv.clone(), t_inv: self.t.clone(), s_inv: self.s.clone() }
    }

    /// The change "first `self`, then `next`" (new basis of the new basis).
    pub fn then(&self, next: &Self) -> Result<Self, AlgebraError> {
        Ok(Self {
            t: self.t.mul(&next.t)?,
            s: self.s.mul(&next.s)?,
            t_inv: next.t_inv.mul(&self.t_inv)?,
            s_inv: next.s_inv.mul(&self.s_inv)?,
        })
    }

    /// Determinant of the full block matrix.
    pub fn determinant(&self) -> Scalar {
        let dt = if self.t.rows() == 0 { Scalar::one() } else { self.t.determinant().expect("square") };
        let ds = if self.s.rows() == 0 { Scalar::one() } else { self.s.determinant().expect("square") };
        Field::times(&dt, &ds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> Basis {
        Basis::E(i - 1)
    }
    fn f(j: usize) -> Basis {
        Basis::F(j - 1)
    }
    fn one() -> Scalar {
        Scalar::one()
    }

    fn alg_1_4_2() -> SuperAlgebra {
        SuperAlgebra::builder(1, 4).product(f(1), f(2), &[(e(1), one())]).unwrap().build()
    }

    #[test]
    fn odd_products_are_skew() {
        let j = alg_1_4_2();
        assert_eq!(j.product_basis(f(1), f(2)), GradedVector::basis(1, 4, e(1)));
        assert_eq!(j.product_basis(f(2), f(1)), GradedVector::basis(1, 4, e(1)).scale(&Scalar::from_int(-1)));
    }

    #[test]
    fn product_with_zero_is_zero() {
        let j = alg_1_4_2();
        let z = GradedVector::zero(1, 4);
        let y = GradedVector::basis(1, 4, f(2));
        assert!(j.product(&z, &y).unwrap().is_zero());
    }

    #[test]
    fn product_rejects_wrong_shapes() {
        let j = alg_1_4_2();
        let bad = GradedVector::zero(2, 3);
        assert!(matches!(j.product(&bad, &bad), Err(AlgebraError::Dimension { .. })));
    }

    #[test]
    fn builder_rejects_parity_violation_and_duplicates() {
        let b = SuperAlgebra::builder(1, 4).product(e(1), f(1), &[(e(1), one())]);
        assert!(matches!(b, Err(AlgebraError::Parity(_))));
        let b = SuperAlgebra::builder(1, 4)
            .product(f(1), f(2), &[(e(1), one())])
            .unwrap()
            .product(f(2), f(1), &[(e(1), one())]);
        assert!(matches!(b, Err(AlgebraError::DuplicateProduct(_))));
    }

    #[test]
    fn identity_change_is_exact() {
        let j = alg_1_4_2();
        let g = BasisChange::identity(1, 4);
        assert!(j.verify_iso_certificate(&j, &g).unwrap());
    }

    #[test]
    fn change_then_inverse_returns_original() {
        let j = alg_1_4_2();
        let t = Matrix::from_rows(vec![vec![Scalar::from_int(3)]]);
        let s = Matrix::from_fn(4, 4, |i, k| if i == k { one() } else if i + 1 == k { Scalar::from_int(2) } else { Scalar::zero() });
        let g = BasisChange::new(t, s).unwrap();
        let moved = j.apply_basis_change(&g).unwrap();
        assert!(!moved.same_constants(&j));
        assert!(moved.apply_basis_change(&g.inverse()).unwrap().same_constants(&j));
    }

    #[test]
    fn singular_change_is_rejected() {
        let t = Matrix::from_rows(vec![vec![Scalar::zero()]]);
        assert_eq!(BasisChange::new(t, Matrix::identity(4)), Err(AlgebraError::SingularChange));
    }

    #[test]
    fn basis_names_parse() {
        assert_eq!(Basis::parse("e1"), Some(Basis::E(0)));
        assert_eq!(Basis::parse("f12"), Some(Basis::F(11)));
        assert_eq!(Basis::parse("f0"), None);
        assert_eq!(Basis::parse("g1"), None);
        assert_eq!(Basis::F(2).to_string(), "f3");
    }
}
