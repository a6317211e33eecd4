//! Exact computations in the Grothendieck lattice K0(P^n).
//!
//! The lattice is modelled through Hilbert polynomials: a class is an
//! integer-valued polynomial of degree at most `n`, the Euler form is an
//! integer bilinear form, and tensoring, twisting and restriction become
//! polynomial operators. On top of that the crate classifies isometries of
//! the Euler form, computes generators of the identity component of the
//! lattice isometry group, and acts on exceptional bases by braid mutations.

pub mod error;
pub mod exceptional;
pub mod hnf;
pub mod isometry;
pub mod json;
pub mod lattice;
pub mod linalg;
pub mod multipoly;
pub mod operator;
pub mod poly;
pub mod tensor;

pub use error::{Error, Result};
pub use lattice::{Basis, GramMatrix, K0Class, ProjectiveContext};
pub use linalg::{Matrix, Rational};
pub use operator::{OperatorMatrix, OperatorSeries, Sign};
