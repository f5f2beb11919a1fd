//! Exact verification engine for finite-dimensional Jordan superalgebras given
//! by structure constants: identities, invariants, degenerations and the
//! degeneration order on a catalog.

pub mod algebra;
pub mod catalog;
pub mod degeneration;
pub mod corpus;
pub mod exec;
pub mod graph;
pub mod identity;
pub mod invariants;
pub mod scalar;

pub use exec::Exec;
pub use algebra::{AlgebraError, Basis, BasisChange, GradedVector, Param, Parity, SuperAlgebra};
pub use scalar::{Matrix, Rational, Scalar};
