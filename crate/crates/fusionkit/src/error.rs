use thiserror::Error;

/// Crate-wide error type. Variants are grouped by how callers should react:
/// bad input (`InvalidSignature`..`Domain`), level-quantisation violations
/// (`NotPermissible`), and numerical-conditioning failures (the rest).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid signature {0:?}: entries must be weakly decreasing")]
    InvalidSignature(Vec<i64>),

    #[error("rank mismatch: expected length {expected}, got {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("signature {sig:?} is not permissible at level {level}")]
    NotPermissible { sig: Vec<i64>, level: i64 },

    #[error("degenerate spectrum: minimal eigenvalue gap {gap:.3e} below threshold {threshold:.3e}")]
    DegenerateSpectrum { gap: f64, threshold: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("internal consistency violation: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
