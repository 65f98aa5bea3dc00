//! Dense complex linear algebra on small Hilbert spaces.
//!
//! Composite spaces are ordered system-first: a product state lives at
//! index `i * dim_m + j` for system component `i` and pointer component `j`.

mod eig;
mod matrix;

pub use eig::{hermitian_eig, hermitian_log, normal_eig, unitary_exp, HermitianEig, NormalEig};
pub use matrix::{operator_distance, ComplexMatrix, StateVector};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;
