use thiserror::Error;

/// Every failure the library reports. The CLI maps these onto exit codes.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("invalid algebra:\n  {}", .0.join("\n  "))]
    Invalid(Vec<String>),
    #[error("sign constraints unsatisfiable: {0}")]
    Unsat(String),
    #[error("invalid string: {0}")]
    BadString(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("INDETERMINATE: search cap of {cap} states exceeded in {what}")]
    Indeterminate { what: String, cap: usize },
    #[error("internal invariant failed: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Default out-of-memory guard for explicit searches.
pub const DEFAULT_CAP: usize = 1_000_000;
