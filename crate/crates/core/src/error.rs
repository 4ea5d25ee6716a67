use thiserror::Error;

/// Errors raised by the Krein-space routines.
///
/// The variants fall into three groups that the command-line front end maps
/// onto distinct exit codes: malformed input, violated structural invariants
/// and numerical-resolution refusals.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum KreinError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("invalid fundamental symmetry: {0}")]
    InvalidSymmetry(String),

    #[error("subspace is zero-dimensional")]
    ZeroSubspace,

    #[error("subspace is not {expected} (Gram eigenvalues span [{min:.3e}, {max:.3e}])")]
    WrongDefiniteness { expected: &'static str, min: f64, max: f64 },

    #[error("not a contraction: largest singular value {0:.17e} exceeds 1")]
    NotContraction(f64),

    #[error("operator is not symmetric on its domain (residual {0:.3e})")]
    NotSymmetric(f64),

    #[error("domain is not invariant under J (residual {0:.3e})")]
    DomainNotInvariant(f64),

    #[error("operator does not anticommute with J (residual {0:.3e})")]
    NotAnticommuting(f64),

    #[error("numerical rank failure: {0}")]
    RankFailure(String),

    #[error("Cayley transform undefined: -1 is (numerically) an eigenvalue, distance {0:.3e}")]
    CayleyUndefined(f64),

    #[error("matrix is not positive definite (smallest eigenvalue {0:.3e})")]
    NotPositiveDefinite(f64),

    #[error("matrix is not positive semidefinite (smallest eigenvalue {0:.3e})")]
    NotPositiveSemidefinite(f64),

    #[error("X is not a nonnegative contraction on the defect space: {0}")]
    XOutOfInterval(String),

    #[error("defect space is trivial")]
    TrivialDefect,

    #[error("vector has a component {0:.3e} along the kernel of a degenerate metric")]
    DegenerateDirection(f64),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("grid under-resolved: {0}")]
    UnderResolved(String),

    #[error("frequency band overflow: {0}")]
    BandOverflow(String),

    #[error("eigensolver failure: {0}")]
    Eigensolver(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}

impl KreinError {
    /// Whether the error is a numerical-resolution refusal rather than a
    /// structural defect of the input.
    pub fn is_resolution_refusal(&self) -> bool {
        matches!(
            self,
            KreinError::UnderResolved(_)
                | KreinError::BandOverflow(_)
                | KreinError::Eigensolver(_)
                | KreinError::CayleyUndefined(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, KreinError>;
