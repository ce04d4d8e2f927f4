use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("truncation error: {0}")]
    Truncation(String),

    #[error("numerical consistency error: {0}")]
    NumericalConsistency(String),

    /// The Gaussian kernel is narrower than the grid spacing.
    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("window error: {0}")]
    Window(String),

    #[error("step-size error: {0}")]
    StepSize(String),

    #[error("regime error: {0}")]
    Regime(String),

    #[error("input error: {0}")]
    Input(String),

    #[error("convergence error: {0}")]
    Convergence(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Error {
    /// True for errors caused by a too-small basis or phase-space window.
    pub fn is_truncation(&self) -> bool {
        matches!(self, Error::Truncation(_) | Error::Window(_) | Error::Dimension(_))
    }
}
