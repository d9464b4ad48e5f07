//! Numerical verification toolkit for complex extensions of pseudo-Riemannian
//! symmetric spaces of orthogonal type.

pub mod domain_tests;
pub mod error;
pub mod hyperboloid;
pub mod matrix_core;
pub mod root_lattice;
pub mod sampling;
pub mod symmetric_pair;
pub mod tolerances;

pub use error::{Error, Result};
