//! Simulation toolkit for ideal von Neumann measurements.
//!
//! A premeasurement couples a system to a pointer so that system eigenstates
//! drive the pointer into distinguishable readout states. The modules here
//! build such models, decompose the resulting entangled states into
//! biorthonormal (Schmidt) form, detect when equal coefficients make that
//! form non-unique, and check which of the rival decompositions the
//! apparatus dynamics actually calibrates.

pub mod cli;
pub mod error;
pub mod measurement;
pub mod modelfile;
pub mod models;
pub mod report;
pub mod schmidt;
pub mod tensor;

pub use error::{Error, Result};
pub use measurement::{
    ambiguity_report, basis_match_score, counterfactual_apparatus, evolution_operator,
    extract_calibration_basis, pointer_physicality_check, premeasure, AmbiguityReport,
    AnalysisOptions, CalibrationTable, CandidateAssessment, MeasurementModel, Verdict,
};
pub use models::{bit_by_bit_model, spin_half, stern_gerlach_model, SpinHalf};
pub use schmidt::{
    alternative_decomposition, degeneracy_classes, schmidt_decompose, uniqueness_condition,
    BasisChange, BipartiteState, SchmidtDecomposition, UniquenessCheck,
};
pub use tensor::{
    hermitian_eig, hermitian_log, normal_eig, operator_distance, unitary_exp, ComplexMatrix,
    HermitianEig, NormalEig, StateVector, C64,
};

/// Relative Frobenius tolerance for accepting a matrix as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Frobenius tolerance for accepting a matrix as unitary.
pub const UNITARITY_TOL: f64 = 1e-10;
/// Tolerance on |norm - 1| for state normalization checks.
pub const NORMALIZATION_TOL: f64 = 1e-12;
/// Default relative tolerance for grouping Schmidt coefficients into
/// degeneracy classes.
pub const DEGENERACY_REL_TOL: f64 = 1e-9;
/// Default cutoff below which Schmidt coefficients are discarded.
pub const SCHMIDT_CUTOFF: f64 = 1e-12;
/// Default tolerance for calibration extraction residuals and commutator
/// checks.
pub const CALIBRATION_TOL: f64 = 1e-10;
/// Default seed for the randomized steps of calibration extraction.
pub const DEFAULT_SEED: u64 = 42;
