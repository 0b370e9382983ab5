use thiserror::Error;

use crate::linalg::Subspace;
use crate::presentation::{Generator, PresentationId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("generator {0} is not assigned")]
    Unassigned(Generator),

    #[error("presentation mismatch: expected {expected}, found {found}")]
    Presentation {
        expected: PresentationId,
        found: PresentationId,
    },

    #[error("invalid Cartan data: {0}")]
    Cartan(String),

    #[error("not a ladder: the spectrum of {operator} is not contained in a single q_i-ladder")]
    NotALadder { operator: String },

    #[error("field escape: {operator} has eigenvalues outside the rationals")]
    FieldEscape { operator: String },

    #[error("asymmetric spectrum for {operator}: occupied slots {slots:?} are not symmetric")]
    AsymmetricSpectrum { operator: String, slots: Vec<u32> },

    #[error("type mismatch at node {node}: expected {expected}, detected {detected}")]
    TypeMismatch {
        node: usize,
        expected: String,
        detected: String,
    },

    #[error("{operator} is not semisimple on V")]
    NotSemisimple { operator: String },

    #[error("split decomposition fails at node {node}: {detail}")]
    SplitViolation { node: usize, detail: String },

    #[error("{stage}: relations failed: {}", failed.join(", "))]
    RelationFailure { stage: String, failed: Vec<String> },

    #[error("refused: module is reducible (invariant subspace of dimension {})", witness.dim())]
    Reducible { witness: Subspace },

    #[error("factory gate failed: {0}")]
    FactoryGate(String),

    #[error("orbit did not close within {0} vertices")]
    OrbitBound(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
