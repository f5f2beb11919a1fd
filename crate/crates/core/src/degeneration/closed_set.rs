//! The closed set `R ⊂ JS^(2,3)` cut out by `ρ_{ij}^k = 0` (i ∈ {1,2},
//! j ∈ {2,3}) and `Γ_{23}^l = 0`, used against `(2,3)_30 → (2,3)_7`.
//!
//! Membership of `g·J` only depends on which products of the new basis
//! vanish: `E_i F_j = 0` for j ∈ {2,3} and `F_2 F_3 = 0`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Block, SuperAlgebra};
use crate::exec::Exec;
use crate::scalar::{Matrix, Rational, Scalar};

/// The defining equations of `R`, each a single structure constant.
pub fn r_conditions() -> Vec<(Block, usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..2 {
        for j in 1..3 {
            for k in 0..3 {
                out.push((Block::Rho, i, j, k));
            }
        }
    }
    for l in 0..2 {
        out.push((Block::Gamma, 1, 2, l));
    }
    out
}

fn at(j: &SuperAlgebra, (block, a, b, c): (Block, usize, usize, usize)) -> &Scalar {
    match block {
        Block::C => j.c(a, b, c),
        Block::Rho => j.rho(a, b, c),
        Block::Gamma => j.gamma(a, b, c),
    }
}

pub fn in_closed_set_r(j: &SuperAlgebra) -> bool {
    j.kind() == (2, 3) && r_conditions().into_iter().all(|c| at(j, c).is_zero())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// A permutation of the even and odd basis that moves `j` into `R`.
pub fn permutation_witness(j: &SuperAlgebra) -> Option<(Vec<usize>, Vec<usize>)> {
    for pe in permutations(2) {
        for po in permutations(3) {
            let mut moved = SuperAlgebra::zero(2, 3);
            for (block, a, b, c, v) in j.constants() {
                let (a2, b2, c2) = match block {
                    Block::C => (inv(&pe, a), inv(&pe, b), inv(&pe, c)),
                    Block::Rho => (inv(&pe, a), inv(&po, b), inv(&po, c)),
                    Block::Gamma => (inv(&po, a), inv(&po, b), inv(&pe, c)),
                };
                moved.set(block, a2, b2, c2, v.clone());
            }
            if in_closed_set_r(&moved) {
                return Some((pe, po));
            }
        }
    }
    None
}

// new index of the old basis vector `x` when new vector k is old perm[k]
fn inv(perm: &[usize], x: usize) -> usize {
    perm.iter().position(|&p| p == x).expect("permutation")
}

/// Exact obstruction: in `R`, `F_2, F_3` lie in `K = {f odd : J_0 f = 0}` and
/// `F_2 F_3 = 0`. Returns `Some(true)` when no such pair exists in `K`.
pub fn kernel_obstruction(j: &SuperAlgebra) -> (usize, Option<bool>) {
    let (m, n) = j.kind();
    // odd f with e_i f = 0 for all i
    let rows: Vec<Vec<Scalar>> = (0..m)
        .flat_map(|i| (0..n).map(move |k| (i, k)))
        .map(|(i, k)| (0..n).map(|l| j.rho(i, l, k).clone()).collect())
        .collect();
    let kernel = if rows.is_empty() { identity_rows(n) } else { Matrix::from_rows(rows).nullspace() };
    let dim = kernel.len();
    let verdict = match dim {
        0 | 1 => Some(true),
        2 => {
            let (x, y) = (&kernel[0], &kernel[1]);
            let nonzero = (0..m).any(|k| {
                let mut s = Scalar::zero();
                for a in 0..n {
                    for b in 0..n {
                        s = s.add(&x[a].mul(&y[b]).mul(j.gamma(a, b, k)));
                    }
                }
                !s.is_zero()
            });
            Some(nonzero)
        }
        _ => None,
    };
    (dim, verdict)
}

fn identity_rows(n: usize) -> Vec<Vec<Scalar>> {
    (0..n).map(|i| (0..n).map(|k| if i == k { Scalar::one() } else { Scalar::zero() }).collect()).collect()
}

/// Rational product table of a constant (2,3) algebra: `table[a][b]` is `b_a b_b`.
fn rational_table(j: &SuperAlgebra) -> Option<Vec<Vec<Vec<Rational>>>> {
    let d = j.dim();
    let mut out = vec![vec![vec![Rational::from_integer(0.into()); d]; d]; d];
    for a in 0..d {
        for b in 0..d {
            for (k, s) in j.basis_product(a, b) {
                out[a][b][k] = s.to_rational()?;
            }
        }
    }
    Some(out)
}

fn mul(table: &[Vec<Vec<Rational>>], x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    let d = x.len();
    let mut out = vec![Rational::from_integer(0.into()); d];
    for a in (0..d).filter(|&a| x[a] != Rational::from_integer(0.into())) {
        for b in (0..d).filter(|&b| y[b] != Rational::from_integer(0.into())) {
            let c = &x[a] * &y[b];
            for k in 0..d {
                if table[a][b][k] != Rational::from_integer(0.into()) {
                    out[k] += &c * &table[a][b][k];
                }
            }
        }
    }
    out
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix<Rational> {
    loop {
        let m = Matrix::from_fn(n, n, |_, _| Rational::from_integer(rng.gen_range(-9i64..=9).into()));
        if m.rank() == n {
            return m;
        }
    }
}

/// One random `(T, S)` applied to `j`: is `g·j ∈ R`?
fn sample_member(table: &[Vec<Vec<Rational>>], seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = random_invertible(&mut rng, 2);
    let s = random_invertible(&mut rng, 3);
    let zero = Rational::from_integer(0.into());
    let even = |k: usize| -> Vec<Rational> {
        let mut v = vec![zero.clone(); 5];
        for i in 0..2 {
            v[i] = t[(i, k)].clone();
        }
        v
    };
    let odd = |k: usize| -> Vec<Rational> {
        let mut v = vec![zero.clone(); 5];
        for i in 0..3 {
            v[2 + i] = s[(i, k)].clone();
        }
        v
    };
    let vanishes = |x: &[Rational], y: &[Rational]| mul(table, x, y).iter().all(|c| *c == zero);
    (0..2).all(|i| (1..3).all(|jj| vanishes(&even(i), &odd(jj)))) && vanishes(&odd(1), &odd(2))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedSetReport {
    pub source: String,
    pub target: String,
    /// Number of coordinate equations defining `R`.
    pub equations: usize,
    pub source_raw_in_r: bool,
    /// Even and odd permutation (new vector k = old vector perm[k]) moving the source into `R`.
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
    pub target_raw_in_r: bool,
    pub target_kernel_dim: usize,
    /// `Some(true)`: the kernel argument excludes the whole target orbit.
    pub target_excluded: Option<bool>,
    pub samples: usize,
    pub members: usize,
    pub seed: u64,
}

impl ClosedSetReport {
    pub fn consistent(&self) -> bool {
        self.witness.is_some() && !self.target_raw_in_r && self.members == 0
    }
}

impl fmt::Display for ClosedSetReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "R: {} linear equations in the structure constants (closed)", self.equations)?;
        writeln!(f, "{} in R as given: {}", self.source, self.source_raw_in_r)?;
        match &self.witness {
            Some((pe, po)) => {
                let e: Vec<String> = pe.iter().map(|i| format!("e{}", i + 1)).collect();
                let o: Vec<String> = po.iter().map(|i| format!("f{}", i + 1)).collect();
                writeln!(f, "{} moved into R by the basis {{{}, {}}}", self.source, e.join(", "), o.join(", "))?;
            }
            None => writeln!(f, "no permutation moves {} into R", self.source)?,
        }
        writeln!(f, "{} in R as given: {}", self.target, self.target_raw_in_r)?;
        let excl = match self.target_excluded {
            Some(true) => "orbit excluded",
            Some(false) => "not excluded",
            None => "undetermined",
        };
        writeln!(f, "odd kernel of J_0 on {}: dim {} ({excl})", self.target, self.target_kernel_dim)?;
        writeln!(f, "{} random orbit points (seed {}): {} in R", self.samples, self.seed, self.members)?;
        let verdict = if self.consistent() { "consistent with" } else { "NOT consistent with" };
        write!(f, "{verdict} the closed-set argument (evidence, not a proof)")
    }
}

/// Evidence for `source ↛ target` via `R`: a witness that the source orbit
/// meets `R`, and `samples` random points of the target orbit, none of which
/// may lie in `R`. Sample `i` uses the seed `seed + i`.
pub fn closed_set_check(source: &SuperAlgebra, target: &SuperAlgebra, samples: usize, seed: u64, exec: Exec) -> ClosedSetReport {
    let (target_kernel_dim, target_excluded) = kernel_obstruction(target);
    let members = match rational_table(target) {
        Some(table) if target.kind() == (2, 3) => {
            exec.map_range(samples, |i| sample_member(&table, seed.wrapping_add(i as u64))).into_iter().filter(|&b| b).count()
        }
        // symbolic constants cannot be sampled; count every draw as unchecked
        _ => samples,
    };
    ClosedSetReport {
        source: source.name().to_string(),
        target: target.name().to_string(),
        equations: r_conditions().len(),
        source_raw_in_r: in_closed_set_r(source),
        witness: permutation_witness(source),
        target_raw_in_r: in_closed_set_r(target),
        target_kernel_dim,
        target_excluded,
        samples,
        members,
        seed,
    }
}
