use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("entropy gradient requested at a vacuum state")]
    VacuumGradient,

    #[error("eigenvalues are undefined at a vacuum state")]
    UndefinedEigenvalue,

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("shock curve continuation failed after s = {last_good_s}: {reason}")]
    CurveContinuation { last_good_s: f64, reason: String },

    #[error("not a 1-shock: sigma = {sigma} is not below lambda_-(U_L) = {lambda_minus}")]
    NotAOneShock { sigma: f64, lambda_minus: f64 },

    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),

    #[error("accuracy error: {0}")]
    Accuracy(String),

    #[error("integration error: {0}")]
    Integration(String),

    #[error("config integrity error: {0}")]
    ConfigIntegrity(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for configuration problems, 3 for
    /// runtime and numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Parameter(_) | Error::Json(_) => 2,
            _ => 3,
        }
    }
}
