use thiserror::Error;

/// Crate-wide error type. Variants mirror the failure classes of the
/// library operations; the CLI maps them onto exit codes.
#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid word: symbol {symbol} not below alphabet size {alphabet}")]
    InvalidWord { symbol: u64, alphabet: u64 },

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource budget exceeded: {0}")]
    Resource(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("inconsistent parameters: {0}")]
    Inconsistent(String),

    #[error("hypothesis violation: {0}")]
    Hypothesis(String),

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
