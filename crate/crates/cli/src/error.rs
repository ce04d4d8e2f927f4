use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] photonparity::Error),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("cross-check failed: max deviation {deviation:e} between {a} and {b} exceeds {tolerance:e}")]
    CrossCheck { a: String, b: String, deviation: f64, tolerance: f64 },
}

impl CliError {
    /// 2 for configuration problems, 3 for numerical-tolerance failures,
    /// 4 for truncation and window errors.
    pub fn exit_code(&self) -> i32 {
        use photonparity::Error as E;
        match self {
            CliError::Core(e) if e.is_truncation() => 4,
            CliError::Core(
                E::NumericalConsistency(_) | E::Convergence(_) | E::StepSize(_) | E::Resolution(_),
            ) => 3,
            CliError::Core(_) => 2,
            CliError::Config(_) | CliError::Io { .. } | CliError::Csv(_) => 2,
            CliError::CrossCheck { .. } => 3,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
