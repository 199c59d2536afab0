use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cyclotomic order mismatch: {0} vs {1}")]
    OrderMismatch(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("coefficient ring mismatch: {0:?} vs {1:?}")]
    RingMismatch(Vec<u32>, Vec<u32>),
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error("element is not a unit (zero scalar part)")]
    NotUnit,
    #[error("exponent vector has length {got}, ring has {expected} generators")]
    ArityMismatch { expected: usize, got: usize },
    #[error("pole at q=0")]
    PoleAtZero,
    #[error("precondition violated in {op}: {msg}")]
    Precondition { op: &'static str, msg: String },
    #[error("expansion order {order} insufficient: {msg}")]
    InsufficientOrder { order: i64, msg: String },
    #[error("parse error: {0}")]
    Parse(String),
}
