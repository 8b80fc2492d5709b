use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Convergence(String),
    #[error("invariant checks failed: {}", .0.join(", "))]
    Invariant(Vec<String>),
    #[error("{0}")]
    Pipeline(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 0 ok, 1 configuration or i/o, 2 convergence, 3 invariant failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Convergence(_) | CliError::Pipeline(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}
