use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("rank of [1 | F] is {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("duplicate outcome label `{0}`")]
    DuplicateLabel(String),

    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("Fisher metric lost positive definiteness at theta = {theta:?}")]
    PositivityLost { theta: Vec<f64> },

    #[error("expectation point {eta:?} is not strictly inside the momentum polytope")]
    OutsidePolytope { eta: Vec<f64> },

    #[error(
        "Newton iteration did not converge after {iterations} iterations (residual {residual:e})"
    )]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("search space too large: {0}")]
    TooLarge(String),

    #[error("vector is not in the span of 1, F^1, ..., F^n (residual {residual:e})")]
    NotInSpan { residual: f64 },

    #[error("polytope has {0} vertices, more than the enumeration guard allows")]
    TooManyVertices(usize),

    #[error("coordinate change is not affine (second-difference residual {0:e})")]
    NonAffineChange(f64),

    #[error("lattice basis is singular")]
    SingularBasis,

    #[error("Weyl element {element} does not act integrally on the lattice: offending entries {entries:?}")]
    NonIntegral {
        element: usize,
        entries: Vec<(usize, usize, f64)>,
    },

    #[error("Weyl group realizations disagree: witness order {witness_order}, polytope order {polytope_order}, offending vertex action {offending:?}")]
    Mismatch {
        witness_order: usize,
        polytope_order: usize,
        offending: Option<Vec<usize>>,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
