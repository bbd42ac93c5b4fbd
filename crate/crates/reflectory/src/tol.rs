//! Numerical tolerances and margins used throughout the crate.
//!
//! All norms are Frobenius norms; all margins are absolute distances in the
//! spectral plane. The values assume double precision and matrix sizes up to
//! a few dozen.

/// Structural invariants of projectors and Hermitian unitaries.
pub const TOL_STRUCT: f64 = 1e-10;

/// Pointwise equality of loop evaluations.
pub const TOL_EVAL: f64 = 1e-10;

/// Residual bound for refactorization identities.
pub const TOL_REFAC: f64 = 1e-9;

/// Minimum distance of a spectral parameter from the real and imaginary axes.
pub const EPS_AXIS: f64 = 1e-8;

/// Minimum distance of an evaluation point from any pole.
pub const EPS_POLE: f64 = 1e-8;

/// Minimum pairwise distance between spectral supports.
pub const EPS_SEP: f64 = 1e-6;

/// Reject linear solves whose reciprocal condition estimate falls below this.
pub const RCOND_MIN: f64 = 1e-12;

/// Eigenvalues of a near-projector are rounded to {0,1} within this window.
pub const EIG_ROUND: f64 = 1e-6;

/// Finite-difference step for tangent maps.
pub const FD_STEP: f64 = 1e-5;

/// Number of sample points used when comparing rational loops pointwise.
pub const SAMPLE_COUNT: usize = 8;

/// Sample points keep at least this distance from every pole. Much larger
/// than `EPS_POLE` so the comparison stays well conditioned.
pub const SAMPLE_MARGIN: f64 = 0.3;

/// Stream constant for the internal sample-point generator.
pub const SAMPLE_SEED: u64 = 0x005e_ed0f_5a4d_71e5;
