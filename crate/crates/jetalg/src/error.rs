use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("word letter `{0}` is not 1 or 2")]
    BadLetter(u8),
    #[error("word of length {0} exceeds the supported maximum")]
    WordTooLong(usize),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("no value bound for `{0}`")]
    Unbound(String),
    #[error("curvature vanishes where a negative power of R is required")]
    SingularCurvature,
    #[error("substitution did not close after {passes} passes")]
    NonTermination { passes: usize },
    #[error("{0}")]
    Shape(String),
}

impl From<symexpr::ExprError> for JetError {
    fn from(e: symexpr::ExprError) -> Self {
        match e {
            symexpr::ExprError::Syntax { pos, msg } => JetError::Parse { pos, msg },
            symexpr::ExprError::UnknownIdentifier { name, pos } => {
                JetError::Parse { pos, msg: format!("unknown identifier `{name}`") }
            }
            other => JetError::Parse { pos: 0, msg: other.to_string() },
        }
    }
}
