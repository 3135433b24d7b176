use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("pole: denominator vanishes at {at}")]
    Pole { at: String },

    #[error("division by zero")]
    DivisionByZero,

    #[error("duplicate abscissa {0} in interpolation data")]
    DuplicateAbscissa(String),

    #[error("index {n} outside table range 0..={last}")]
    OutOfTable { n: i64, last: i64 },

    #[error("index {0} below -1 has no coefficient")]
    NegativeIndex(i64),

    #[error("b_n^2 is not positive at n = {n} (value {value})")]
    NotPositive { n: i64, value: String },

    #[error("invalid family parameter: {0}")]
    InvalidFamily(String),

    #[error("operation requires a rational closed form, got a table encoding")]
    TableRejected,

    #[error("table too short: need {needed} values, have {have}")]
    InsufficientTable { needed: usize, have: usize },

    #[error("singular matrix")]
    Singular,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
}
