use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A point was handed to a branch outside that branch's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A value lies outside the range of the inverse branch requested.
    #[error("range error: {0}")]
    Range(String),

    /// An orbit left the side of the critical point its itinerary demands.
    #[error("itinerary violated at step {step}: {detail}")]
    Itinerary { step: usize, detail: String },

    #[error("not renormalizable: {0}")]
    NotRenormalizable(String),

    #[error("renormalized parameters out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("no convergence after {iterations} iterations (last step {last_step:e})")]
    NonConvergence { iterations: usize, last_step: f64 },

    /// Shadow orbits kept leaving the branch ranges after warm-up.
    #[error("inconsistent combinatorics: {0}")]
    Inconsistent(String),

    #[error("singular derivative: {0}")]
    SingularDerivative(String),

    /// The critical point ran into the boundary of (0, 1).
    #[error("critical point degenerated (c = {c})")]
    CDegenerate { c: f64 },

    #[error("fixed-point search failed during {phase} after {iterations} cycles: {cause}")]
    SearchFailure {
        phase: &'static str,
        iterations: usize,
        cause: Box<Error>,
    },

    #[error("eigenvalue solver failed: {0}")]
    SolverFailure(String),

    #[error("first-return oracle mismatch: {0}")]
    OracleMismatch(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    /// The innermost cause, unwrapping search-failure layers.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::SearchFailure { cause, .. } => cause.root_cause(),
            other => other,
        }
    }

    /// Whether the failure is the critical point running off to 0 or 1.
    pub fn is_c_degenerate(&self) -> bool {
        matches!(self.root_cause(), Error::CDegenerate { .. })
    }
}
