//! Idempotents, Peirce spectra and configuration types of low-dimensional
//! commutative nonassociative algebras, with the associated quadratic ODEs.

pub mod algebra;
pub mod cli;
pub mod classify;
pub mod families;
pub mod io;
pub mod linalg;
pub mod ode;
pub mod poly;
pub mod scalar;
pub mod solver;

pub use algebra::{Algebra, AlgebraError, AnyAlgebra, Element, MultOperator, Spectrum};
pub use scalar::{Complex64, Num, Rational, Scalar, ScalarMode, Tolerance};
