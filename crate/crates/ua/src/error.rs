use thiserror::Error;

/// Every failure the library reports. Budget exhaustion is kept separate so
/// callers can turn it into an `Unknown` verdict.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("value out of range: `{symbol}` entry {index} is {value} but the size is {size}")]
    ValueOutOfRange {
        symbol: String,
        index: usize,
        value: usize,
        size: usize,
    },
    #[error("missing table for symbol `{0}`")]
    MissingTable(String),
    #[error("table given for undeclared symbol `{0}`")]
    ExtraTable(String),
    #[error("wrong table shape for `{symbol}`: {detail}")]
    TableShape { symbol: String, detail: String },
    #[error("algebra of size {size} exceeds the size cap {cap}")]
    SizeCap { size: usize, cap: usize },
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("arity mismatch for `{symbol}`: expected {expected}, found {found}")]
    Arity {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("not a congruence: {0}")]
    NotCongruence(String),
    #[error("formula class mismatch: expected {expected}, found {found}")]
    FormulaClass { expected: String, found: String },
    #[error("not functional: {0}")]
    NotFunctional(String),
    #[error("not total: no value at {0:?}")]
    NotTotal(Vec<usize>),
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Invalid(format!("json: {e}"))
    }
}
