use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("symbol `{0}` is already registered")]
    DuplicateSymbol(String),
    #[error("`{0}` is not a valid symbol name")]
    BadSymbol(String),
    #[error("symbol registry is full")]
    RegistryFull,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("window [{lo}, {hi}] exceeds the expansion bound")]
    WindowTooLarge { lo: i64, hi: i64 },
    #[error("exponent out of range")]
    ExponentOverflow,
    #[error("cannot expand: {0}")]
    Domain(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
