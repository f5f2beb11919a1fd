//! Exact arithmetic: rationals, Laurent polynomials in `(t, p)`, the field
//! `Q(t, p)` and dense linear algebra over any of these.

mod function;
mod gcd;
mod laurent;
mod matrix;
pub mod rational;

pub use function::Scalar;
pub use laurent::{Exp, LaurentPoly};
pub use matrix::{Field, Matrix};
pub use rational::Rational;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
}

/// The value has a pole of the given order at `t = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("pole of order {order} at t = 0")]
pub struct PoleError {
    pub order: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error("shape mismatch: {left:?} times {right:?}")]
    Shape { left: (usize, usize), right: (usize, usize) },
}
