use thiserror::Error;

use crate::lattice::LatticePoint;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the domain an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    /// Four points that do not span a 3-simplex.
    #[error("singular system: vertices {0:?} are affinely dependent")]
    SingularSystem([LatticePoint; 4]),

    /// A lifting function whose lower hull has a non-simplicial cell.
    #[error("degenerate lift: supporting form of {cell:?} touches {touching} lattice points")]
    Degeneracy { cell: [LatticePoint; 4], touching: usize },

    #[error("certification failed: {0}")]
    Certification(String),

    #[error("tropical complex construction failed: {0}")]
    Construction(String),

    #[error("barycentric coordinates of {point} in {cell:?} are not integral")]
    Unimodularity { cell: [LatticePoint; 4], point: LatticePoint },

    /// A combinatorial or exponent identity that should hold did not.
    #[error("lemma violation: {0}")]
    LemmaViolation(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("no samples landed in the probe window")]
    Coverage,

    #[error("ambiguous root branch at grid index ({i}, {j}): {detail}")]
    Branch { i: usize, j: usize, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
