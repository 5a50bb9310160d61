use thiserror::Error;

/// Errors shared by every module of the crate.
///
/// `Hypothesis` is reserved for the constructive extension lemmas, which
/// promise to name the exact precondition that failed. `BudgetExceeded`
/// is always distinct from a negative answer: a search that runs out of
/// budget has decided nothing.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: u32, n: usize },

    #[error("{what}: got {got}, need {need}")]
    BadArity { what: &'static str, got: usize, need: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degree level {level} must be below the uniformity {k}")]
    LevelTooLarge { level: usize, k: usize },

    #[error("mismatched uniformity: {left} vs {right}")]
    MismatchedK { left: usize, right: usize },

    #[error("pair (k, s) = ({k}, {s}) requires 2 <= k < s")]
    BadPair { k: usize, s: usize },

    #[error("{op}: hypothesis failed: {what}")]
    Hypothesis { op: &'static str, what: String },

    #[error("search budget of {budget} nodes exceeded in {op}")]
    BudgetExceeded { op: &'static str, budget: u64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn hypothesis(op: &'static str, what: impl Into<String>) -> Self {
        Error::Hypothesis { op, what: what.into() }
    }
}
