//! Degeneration certificates (limits of parametrized basis changes) and
//! invariant-based non-degeneration arguments.

mod battery;
mod class;
mod closed_set;
mod table;

use std::fmt;

use thiserror::Error;

pub use battery::{battery, check_class, default_identities, Certificate, Profile};
pub use class::NondegClass;
pub use closed_set::{closed_set_check, in_closed_set_r, kernel_obstruction, permutation_witness, ClosedSetReport};
pub use table::{apply_refutations, profiles_for, table_identities, verify_nondeg_table, NondegOptions, RowStatus, RowVerdict};

use crate::algebra::{AlgebraError, BasisChange, ConstantDiff, SuperAlgebra};
use crate::catalog::{Catalog, DegenerationCertificate};
use crate::scalar::{Matrix, Rational, Scalar, ScalarError};

/// Constants of the limit that differ from the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MismatchReport {
    pub diffs: Vec<ConstantDiff>,
    /// Target parameter value at which the mismatch occurred, if sampled.
    pub sample: Option<Rational>,
}

impl fmt::Display for MismatchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self.diffs.iter().take(4).map(ToString::to_string).collect();
        write!(f, "{} constants differ", self.diffs.len())?;
        if let Some(s) = &self.sample {
            write!(f, " at sample {s}")?;
        }
        write!(f, ": {}", shown.join("; "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DegenerationError {
    #[error("unknown algebra {0:?}")]
    Unknown(String),
    #[error("parametrized change of basis is singular")]
    Singular,
    #[error("{constant} has a pole of order {order} at t = 0")]
    Pole { constant: String, order: i32 },
    #[error("limit does not match the target: {0}")]
    Mismatch(MismatchReport),
    #[error("sample value {value} is not admissible for {name}")]
    Excluded { name: String, value: Rational },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Successful verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegenerationOutcome {
    /// Exponent-clearing factor `L` used for `t := s^L`.
    pub scale: u32,
    pub samples_checked: usize,
    pub limit: SuperAlgebra,
}

/// Builds the (`t`-dependent) basis change of a certificate after `t := s^L`.
pub fn certificate_change(cert: &DegenerationCertificate, scale: u32) -> Result<BasisChange, DegenerationError> {
    let m = cert.even.len();
    let n = cert.odd.len();
    let t = Matrix::from_fn(m, m, |i, k| cert.even[k].coefficient(Some(crate::Basis::E(i)), scale));
    let s = Matrix::from_fn(n, n, |i, k| cert.odd[k].coefficient(Some(crate::Basis::F(i)), scale));
    BasisChange::new(t, s).map_err(|_| DegenerationError::Singular)
}

/// `J_t` for a certificate: the source with the parameter curve substituted,
/// written in the parametrized basis.
pub fn transported(cert: &DegenerationCertificate, source: &SuperAlgebra) -> Result<(SuperAlgebra, u32), DegenerationError> {
    let scale = cert.exponent_lcm();
    let src = match &cert.param {
        Some(curve) => source.substitute_param(&curve.value.coefficient(None, scale)).map_err(|e| match e {
            AlgebraError::Scalar(s) => DegenerationError::Scalar(s),
            _ => DegenerationError::Singular,
        })?,
        None => source.clone(),
    };
    let g = certificate_change(cert, scale)?;
    let moved = src.apply_basis_change(&g).map_err(|_| DegenerationError::Singular)?;
    Ok((moved, scale))
}

/// Limit at `t = 0` of every structure constant.
pub fn limit_at_zero(j: &SuperAlgebra) -> Result<SuperAlgebra, DegenerationError> {
    let mut failure = None;
    let lim = j.map_constants(|_, s| match s.eval_at_zero() {
        Ok(v) => Ok(v),
        Err(e) => {
            failure.get_or_insert((s.clone(), e.order));
            Ok(Scalar::zero())
        }
    })?;
    if failure.is_some() {
        let (block, i, jj, k, _) = j
            .constants()
            .find(|(_, _, _, _, s)| s.eval_at_zero().is_err())
            .expect("a constant has a pole");
        let order = failure.map(|f| f.1).unwrap_or(0);
        return Err(DegenerationError::Pole { constant: format!("{block:?}[{},{}->{}]", i + 1, jj + 1, k + 1), order });
    }
    Ok(lim)
}

fn compare(limit: &SuperAlgebra, target: &SuperAlgebra, sample: Option<Rational>) -> Result<(), DegenerationError> {
    if limit.same_constants(target) {
        Ok(())
    } else {
        Err(DegenerationError::Mismatch(MismatchReport { diffs: limit.diff(target), sample }))
    }
}

/// Checks one certificate: clear exponents, substitute the parameter curve,
/// transport, take the limit and compare with the target bit-exactly
/// (symbolically, then at every listed sample of the target parameter).
pub fn verify_degeneration(cert: &DegenerationCertificate, catalog: &Catalog) -> Result<DegenerationOutcome, DegenerationError> {
    let src = catalog.get(&cert.source).ok_or_else(|| DegenerationError::Unknown(cert.source.clone()))?;
    let tgt = catalog.get(&cert.target).ok_or_else(|| DegenerationError::Unknown(cert.target.clone()))?;
    let (moved, scale) = transported(cert, &src.algebra)?;
    let limit = limit_at_zero(&moved)?.with_name(format!("lim {}", cert.source)).with_param(tgt.param.clone());
    compare(&limit, &tgt.algebra, None)?;
    for value in &cert.samples {
        if let Some(p) = &tgt.param {
            if !p.admits(value) {
                return Err(DegenerationError::Excluded { name: p.name.clone(), value: value.clone() });
            }
        }
        // the source parameter at this sample must be admissible too
        if let (Some(curve), Some(sp)) = (&cert.param, &src.param) {
            let at = curve.value.coefficient(None, scale).specialize_p(value)?;
            if let Some(r) = at.to_rational() {
                if !sp.admits(&r) {
                    return Err(DegenerationError::Excluded { name: sp.name.clone(), value: r });
                }
            }
        }
        let lim_s = limit.map_constants(|_, s| s.specialize_p(value))?;
        let tgt_s = tgt.algebra.specialize(value).map_err(|_| DegenerationError::Excluded {
            name: cert.target.clone(),
            value: value.clone(),
        })?;
        compare(&lim_s, &tgt_s, Some(value.clone()))?;
    }
    Ok(DegenerationOutcome { scale, samples_checked: cert.samples.len(), limit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{parse_catalog, parse_certificates};

    const CAT: &str = r#"
[superalgebra]
name = "(1,4)_2"
even = 1
odd = 4
product f1*f2 = e1

[superalgebra]
name = "(1,4)_3"
even = 1
odd = 4
product f1*f2 = e1
product f3*f4 = e1

[superalgebra]
name = "(1,4)_1"
even = 1
odd = 4
"#;

    fn catalog() -> Catalog {
        Catalog::from_files(vec![parse_catalog(CAT).unwrap()]).unwrap()
    }

    fn cert(body: &str) -> DegenerationCertificate {
        parse_certificates(body, &catalog()).unwrap().remove(0)
    }

    #[test]
    fn scaling_kills_one_product() {
        let c = cert("[degeneration]\nsource = \"(1,4)_3\"\ntarget = \"(1,4)_2\"\nbasis E1 = e1\nbasis F1 = f1\nbasis F2 = f2\nbasis F3 = t*f3\nbasis F4 = f4\n");
        let out = verify_degeneration(&c, &catalog()).unwrap();
        assert_eq!(out.scale, 1);
    }

    #[test]
    fn inverse_scaling_has_a_pole() {
        let c = cert("[degeneration]\nsource = \"(1,4)_3\"\ntarget = \"(1,4)_2\"\nbasis E1 = e1\nbasis F1 = f1\nbasis F2 = f2\nbasis F3 = t^-1*f3\nbasis F4 = f4\n");
        assert!(matches!(verify_degeneration(&c, &catalog()), Err(DegenerationError::Pole { .. })));
    }

    #[test]
    fn everything_degenerates_to_zero() {
        // g(t) = t^-1 on the constants is the basis t*b
        let c = cert("[degeneration]\nsource = \"(1,4)_3\"\ntarget = \"(1,4)_1\"\nbasis E1 = t*e1\nbasis F1 = t*f1\nbasis F2 = t*f2\nbasis F3 = t*f3\nbasis F4 = t*f4\n");
        verify_degeneration(&c, &catalog()).unwrap();
    }

    #[test]
    fn wrong_target_is_a_mismatch() {
        let c = cert("[degeneration]\nsource = \"(1,4)_3\"\ntarget = \"(1,4)_1\"\nbasis E1 = e1\nbasis F1 = f1\nbasis F2 = f2\nbasis F3 = t*f3\nbasis F4 = f4\n");
        match verify_degeneration(&c, &catalog()) {
            Err(DegenerationError::Mismatch(r)) => assert!(!r.diffs.is_empty()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn singular_change_is_reported() {
        let c = cert("[degeneration]\nsource = \"(1,4)_3\"\ntarget = \"(1,4)_2\"\nbasis E1 = e1\nbasis F1 = f1\nbasis F2 = f1\nbasis F3 = t*f3\nbasis F4 = f4\n");
        assert_eq!(verify_degeneration(&c, &catalog()), Err(DegenerationError::Singular));
    }
}
