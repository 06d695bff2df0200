use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The requested charge sector is empty or out of range.
    #[error("empty charge sector: L = {n_qubits}, q = {charge}")]
    EmptySector { n_qubits: usize, charge: i64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A computation was refused because it would be too expensive.
    #[error("refused: {what} (estimated cost {estimate})")]
    CostGuard { what: String, estimate: String },

    /// A numerical contract (residual, orthonormality, hermiticity, ...) failed.
    #[error("numerical contract violated: {0}")]
    Numerical(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numerical(_) => 3,
            _ => 2,
        }
    }
}
