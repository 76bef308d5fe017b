use thiserror::Error;

#[derive(Debug, Error)]
pub enum WbError {
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

pub type WbResult<T> = std::result::Result<T, WbError>;

impl WbError {
    /// Process exit code: 1 invalid parameters, 2 numerical failure, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            WbError::Invalid(_) => 1,
            WbError::Numerical(_) => 2,
            WbError::Io(_) => 3,
        }
    }

    /// Short tag used in the status column of sweep tables.
    pub fn status(&self) -> &'static str {
        match self {
            WbError::Invalid(_) => "invalid-params",
            WbError::Numerical(_) => "numerical-failure",
            WbError::Io(_) => "io-failure",
        }
    }
}

impl From<qpforce::Error> for WbError {
    fn from(e: qpforce::Error) -> Self {
        match e {
            qpforce::Error::InvalidArgument(m) => WbError::Invalid(m),
            other => WbError::Numerical(other.to_string()),
        }
    }
}
