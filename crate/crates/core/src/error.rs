use thiserror::Error;

/// Errors raised by the numerical kernels and the classification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty generator list")]
    EmptyGenerators,

    #[error("subspace is not invariant under the operator (residual {residual:.3e})")]
    NotInvariant { residual: f64 },

    #[error("eigenvalue {value:.6} of e\u{25a1}e is not within tolerance of 0, 1/2 or 1")]
    NonPeirceEigenvalue { value: f64 },

    #[error("element is not a tripotent")]
    NotTripotent,

    #[error("element does not lie in the Peirce-2 space of the tripotent")]
    NotInPeirce2,

    #[error("subspace is not closed under the triple product (residual {residual:.3e})")]
    NotSubtriple { residual: f64 },

    #[error("grid failed axiom verification: {0}")]
    InvalidGrid(String),

    #[error("e_{{{index}{index}}} depends on the auxiliary indices (residual {residual:.3e}); input is not a symplectic grid")]
    WellDefinedness { index: usize, residual: f64 },

    #[error("central eigenvalue collision persisted after {attempts} attempts")]
    EigenvalueCollision { attempts: usize },

    #[error("block decomposition is inconsistent: {0}")]
    Decomposition(String),

    #[error("word reversal is inconsistent on this realization (residual {residual:.3e}); it is not the universal envelope")]
    NotUniversal { residual: f64 },

    #[error("word enumeration did not span the closure within {max_len} letters")]
    WordLimit { max_len: usize },

    #[error("{0}")]
    Reassigned(String),

    #[error("tripotent diagonalization failed after {attempts} attempts")]
    Diagonalization { attempts: usize },

    #[error("block M_{{{n},{m}}} is a Hilbert-space block; the exact sequence is only computed for blocks of rank >= 2 or 1x1 blocks")]
    HilbertBlock { n: usize, m: usize },

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
