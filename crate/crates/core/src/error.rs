use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),

    #[error("invalid comparison: {0}")]
    InvalidComparison(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("integration diverged at t = {time:e} s: trace drift {drift:e}")]
    IntegrationDiverged { time: f64, drift: f64 },

    #[error("positivity violation at t = {time:e} s: smallest eigenvalue {eigenvalue:e}")]
    PositivityViolation { time: f64, eigenvalue: f64 },

    #[error("unphysical dephasing: tau2 = {tau2:e} s exceeds 2 * tau1 = {limit:e} s")]
    UnphysicalDephasing { tau2: f64, limit: f64 },

    #[error("invalid coupling regime: {0}")]
    InvalidRegime(String),

    #[error("not dispersive: detuning {detuning:e} rad/s is below {factor} x coupling {coupling:e} rad/s")]
    NotDispersive {
        detuning: f64,
        coupling: f64,
        factor: f64,
    },

    #[error("model inconsistency: {0}")]
    ModelInconsistency(String),

    #[error("surface integration failed: {0}")]
    IntegrationFailure(String),

    #[error("too few samples for spectrum: {found} < {required}")]
    TooFewSamples { found: usize, required: usize },

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("config error{}: {message}", location(.line, .field))]
    Config {
        message: String,
        line: Option<usize>,
        field: Option<String>,
    },

    #[error("cannot resolve parameter path `{0}`")]
    UnresolvedPath(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn location(line: &Option<usize>, field: &Option<String>) -> String {
    match (line, field) {
        (Some(l), Some(f)) => format!(" at line {l}, field `{f}`"),
        (Some(l), None) => format!(" at line {l}"),
        (None, Some(f)) => format!(" in field `{f}`"),
        (None, None) => String::new(),
    }
}

impl Error {
    /// True for errors caused by the numerics rather than by the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::IntegrationDiverged { .. }
                | Error::PositivityViolation { .. }
                | Error::IntegrationFailure(_)
                | Error::ModelInconsistency(_)
        )
    }

    pub(crate) fn param(name: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.to_string(),
            reason: reason.into(),
        }
    }
}
