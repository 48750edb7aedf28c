use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WebError {
    #[error(transparent)]
    Expr(#[from] symexpr::ExprError),
    #[error("web is not in general position at ({x}, {y}): {which} vanishes")]
    Degenerate { x: String, y: String, which: &'static str },
    #[error("ladder order {0} exceeds the supported maximum {1}")]
    OrderTooHigh(usize, usize),
    #[error("word {0} is not in the ladder")]
    MissingWord(String),
}
