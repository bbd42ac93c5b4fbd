//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by constructors, refactorization solvers, and verification
/// drivers.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Input vectors are linearly dependent (or zero), so no orthogonal
    /// projector onto their span exists.
    #[error("degenerate span: input vectors are linearly dependent or zero")]
    DegenerateSpan,

    /// A requested rank is outside `[0, n]` or incompatible with an operation.
    #[error("rank {rank} out of range for dimension {n}")]
    RankError { rank: usize, n: usize },

    /// A matrix expected to be unitary failed the check `‖UU* − I‖ ≤ tol`.
    #[error("matrix is not unitary (defect {defect:.3e})")]
    UnitarityError { defect: f64 },

    /// A matrix expected to be a Hermitian projector failed its structural
    /// invariants and could not be repaired.
    #[error("matrix is not a Hermitian projector (defect {defect:.3e})")]
    ProjectorError { defect: f64 },

    /// Evaluation of a rational loop at or too close to a pole.
    #[error("evaluation point within {dist:.3e} of a pole")]
    PoleError { dist: f64 },

    /// A spectral parameter lies on (or too close to) the real or imaginary
    /// axis where the boundary involution degenerates.
    #[error("spectral parameter {re}+{im}i too close to the real or imaginary axis")]
    AxisError { re: f64, im: f64 },

    /// Two spectral supports `{α, ᾱ}` overlap, so the refactorization problem
    /// has no unique solution.
    #[error("support collision: |{a} - {b}| below separation margin")]
    SupportCollision { a: num_complex::Complex<f64>, b: num_complex::Complex<f64> },

    /// The support of an element meets its own mirror image `−supp`.
    #[error("mirror collision: support of the element meets its mirror set")]
    MirrorCollision,

    /// A linear solve hit a (numerically) singular matrix.
    #[error("singular matrix (reciprocal condition estimate {rcond:.3e})")]
    SingularMatrix { rcond: f64 },

    /// A projective image vector collapsed to (numerical) zero.
    #[error("degenerate image: projective representative has norm {norm:.3e}")]
    DegenerateImage { norm: f64 },

    /// A vector or matrix failed the tangency test at its base point.
    #[error("tangency violation (defect {defect:.3e})")]
    TangencyError { defect: f64 },

    /// An ensemble or parameter set violates the admissibility margins.
    #[error("inadmissible input: {reason}")]
    AdmissibilityError { reason: String },

    /// Malformed input data (JSON schema violations, non-finite entries).
    #[error("invalid input: {reason}")]
    InvalidInput { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
