//! Strategies and checks shared by the property suite and the acceptance run.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestError, TestRng, TestRunner};

use superjordan::catalog::{parse_catalog, parse_certificates, parse_nondeg_table, print_certificates};
use superjordan::corpus::{Corpus, CorpusText};
use superjordan::invariants::fingerprint;
use superjordan::scalar::rational::rat;
use superjordan::scalar::LaurentPoly;
use superjordan::{BasisChange, Matrix, Rational, Scalar, SuperAlgebra};

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

pub fn laurent(t_min: i32) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(((t_min..=2, 0i32..=2), small_rational()), 0..4).prop_map(LaurentPoly::from_terms)
}

pub fn scalar() -> impl Strategy<Value = Scalar> {
    (laurent(-2), laurent(-2)).prop_filter_map("zero denominator", |(n, d)| Scalar::new(n, d).ok())
}

pub fn check_field_axioms(a: &Scalar, b: &Scalar, c: &Scalar) -> Result<(), String> {
    let fail = |what: &str| Err(format!("{what} fails for a={a}, b={b}, c={c}"));
    if a.add(b).add(c) != a.add(&b.add(c)) {
        return fail("additive associativity");
    }
    if a.mul(b).mul(c) != a.mul(&b.mul(c)) {
        return fail("multiplicative associativity");
    }
    if a.mul(&b.add(c)) != a.mul(b).add(&a.mul(c)) {
        return fail("distributivity");
    }
    if a.add(b) != b.add(a) || a.mul(b) != b.mul(a) {
        return fail("commutativity");
    }
    if !a.add(&a.neg()).is_zero() || a.sub(a) != Scalar::zero() {
        return fail("additive inverse");
    }
    if !a.is_zero() {
        let inv = a.inv().map_err(|e| e.to_string())?;
        if !a.mul(&inv).is_one() {
            return fail("multiplicative inverse");
        }
    }
    Ok(())
}

/// Matrices up to 6x6, half of them built as a product through a thin middle
/// so that rank deficiency is common.
pub fn rational_matrix() -> impl Strategy<Value = Vec<Vec<Rational>>> {
    (1usize..=6, 1usize..=6, 0usize..=6, any::<bool>()).prop_flat_map(|(r, c, k, low)| {
        let dense = prop::collection::vec(prop::collection::vec(small_rational(), c), r);
        let left = prop::collection::vec(prop::collection::vec(small_rational(), k), r);
        let right = prop::collection::vec(prop::collection::vec(small_rational(), c), k);
        (dense, left, right).prop_map(move |(d, b, m)| {
            if !low {
                return d;
            }
            (0..r)
                .map(|i| (0..c).map(|j| (0..k).fold(Rational::zero(), |s, l| s + &b[i][l] * &m[l][j])).collect())
                .collect()
        })
    })
}

/// Fraction-free (Bareiss) elimination over the integers after clearing
/// denominators, scanning columns right to left with the largest pivot.
pub fn bareiss_rank(rows: &[Vec<Rational>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::from(1), |l, x| num_integer::lcm(l, x.denom().clone()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    let n_rows = a.len();
    let n_cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    for col in (0..n_cols).rev() {
        let pivot = (rank..n_rows).filter(|&i| !a[i][col].is_zero()).max_by(|&i, &j| a[i][col].abs().cmp(&a[j][col].abs()));
        let Some(p) = pivot else { continue };
        a.swap(rank, p);
        for i in rank + 1..n_rows {
            for j in 0..n_cols {
                if j == col {
                    continue;
                }
                let v = (&a[rank][col] * &a[i][j] - &a[i][col] * &a[rank][j]) / &prev;
                a[i][j] = v;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

pub fn check_rank(rows: &[Vec<Rational>]) -> Result<(), String> {
    let m = Matrix::from_rows(rows.to_vec());
    let (ours, oracle) = (m.rank(), bareiss_rank(rows));
    if ours == oracle {
        Ok(())
    } else {
        Err(format!("rank {ours} vs oracle {oracle} for {rows:?}"))
    }
}

/// Ten non-family entries spread over the three superalgebra types.
pub fn sample_entries(corpus: &Corpus) -> Vec<SuperAlgebra> {
    let picked: Vec<SuperAlgebra> = [(1, 4), (3, 2), (2, 3)]
        .into_iter()
        .flat_map(|k| corpus.catalog.of_kind(k).into_iter().filter(|e| !e.is_family()).map(|e| e.algebra.clone()).step_by(9))
        .collect();
    assert_eq!(picked.len(), 10);
    picked
}

/// Raw material for a random invertible graded change: `L * U` per block with
/// unit lower and nonzero-diagonal upper triangular factors.
pub fn change_seed() -> impl Strategy<Value = (Vec<i64>, Vec<i64>)> {
    (prop::collection::vec(-2i64..=2, 50), prop::collection::vec(prop::sample::select(vec![-2i64, -1, 1, 2]), 10))
}

fn lu_block(n: usize, off: &[i64], diag: &[i64]) -> Matrix<Scalar> {
    let entry = |i: usize, j: usize| off[(i * 5 + j) % off.len()];
    let l = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Greater => Scalar::from_int(entry(i, j)),
        std::cmp::Ordering::Equal => Scalar::one(),
        std::cmp::Ordering::Less => Scalar::zero(),
    });
    let u = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => Scalar::from_int(entry(i, j)),
        std::cmp::Ordering::Equal => Scalar::from_int(diag[i]),
        std::cmp::Ordering::Greater => Scalar::zero(),
    });
    l.mul(&u).expect("square factors")
}

pub fn change_from_seed((m, n): (usize, usize), (off, diag): &(Vec<i64>, Vec<i64>)) -> BasisChange {
    let t = lu_block(m, &off[..25], &diag[..5]);
    let s = lu_block(n, &off[25..], &diag[5..]);
    BasisChange::new(t, s).expect("L*U is invertible")
}

pub fn check_fingerprint_invariance(entries: &[SuperAlgebra], seed: &(Vec<i64>, Vec<i64>)) -> Result<(), String> {
    for j in entries {
        let g = change_from_seed(j.kind(), seed);
        let moved = j.apply_basis_change(&g).map_err(|e| e.to_string())?;
        let (a, b) = (fingerprint(j).map_err(|e| e.to_string())?, fingerprint(&moved).map_err(|e| e.to_string())?);
        if a != b {
            return Err(format!("{}: fingerprint changes under {g:?}", j.name()));
        }
    }
    Ok(())
}

/// Parses and reprints every shipped file; returns the number of files.
pub fn check_corpus_round_trip() -> Result<usize, String> {
    let text = CorpusText::embedded();
    let corpus = Corpus::parse(&text).map_err(|e| e.to_string())?;
    let mut files = 0;
    for (name, t) in &text.catalogs {
        let parsed = parse_catalog(t).map_err(|e| format!("{name}: {e}"))?;
        if parse_catalog(&parsed.to_string()).ok() != Some(parsed) {
            return Err(format!("{name} does not round-trip"));
        }
        files += 1;
    }
    for (name, t) in text.certificates.iter().chain(&text.refutations) {
        let parsed = parse_certificates(t, &corpus.catalog).map_err(|e| format!("{name}: {e}"))?;
        if parse_certificates(&print_certificates(&parsed), &corpus.catalog).ok() != Some(parsed) {
            return Err(format!("{name} does not round-trip"));
        }
        files += 1;
    }
    for (name, t) in &text.nondeg {
        let parsed = parse_nondeg_table(t).map_err(|e| format!("{name}: {e}"))?;
        if parse_nondeg_table(&parsed.to_string()).ok() != Some(parsed) {
            return Err(format!("{name} does not round-trip"));
        }
        files += 1;
    }
    Ok(files)
}

/// Runs `check` on `cases` inputs from a fixed-seed runner.
pub fn run_cases<S: Strategy>(cases: u32, strategy: S, check: impl Fn(S::Value) -> Result<(), String>) -> Result<(), String> {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, |v| check(v).map_err(TestCaseError::fail)).map_err(|e| match e {
        TestError::Fail(msg, _) => msg.to_string(),
        TestError::Abort(msg) => msg.to_string(),
    })
}
