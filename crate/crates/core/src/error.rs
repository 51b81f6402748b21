use crate::osc::OscResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported dimension {0} (at most 8)")]
    UnsupportedDimension(usize),
    #[error("curve is not in graph form (t, y(t), z(t)): {0}")]
    Form(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),
    #[error("budget exceeded: {what}")]
    BudgetExceeded {
        what: String,
        partial: Option<OscResult>,
    },
    #[error("no critical point: {0}")]
    NoCriticalPoint(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
