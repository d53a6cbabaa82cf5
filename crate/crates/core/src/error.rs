use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("instance too large for exhaustive search: {n} spins (cap {cap})")]
    Size { n: usize, cap: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("trial with seed {seed} diverged at step {step}")]
    Divergence { step: usize, seed: u64 },

    #[error("all {trials} trials diverged")]
    AllDiverged { trials: usize },

    #[error("no path from {origin} to {destination}")]
    NoPath { origin: String, destination: String },

    #[error("compile error: {0}")]
    Compile(String),

    #[error("solve failed: {0}")]
    Solve(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
