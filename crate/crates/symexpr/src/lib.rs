//! Symbolic expressions in the plane coordinates `x` and `y`.
//!
//! * [`Expr`]: an immutable, shared expression DAG with folding constructors,
//!   parsing and printing that round-trip on trees.
//! * [`Differentiator`]: memoized symbolic partial derivatives.
//! * [`Tape`]: compiled evaluation in float arithmetic or exactly, with an
//!   explicit float fallback recorded in the returned [`NumValue`].
//! * [`simplify`]: conservative, value-preserving normalization.

pub mod error;
pub mod eval;
pub mod expr;
pub mod num;
pub mod simplify;
pub mod syntax;

pub use error::ExprError;
pub use eval::{eval, eval_f64, EvalMode, Tape};
pub use expr::{Differentiator, Expr, Func, Node, Var};
pub use num::{fmt_rational, rational_to_f64, NumValue};
pub use simplify::simplify;
pub use syntax::{parse_ast, Ast, BinOp};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Parses `src` into an expression.
pub fn parse(src: &str) -> Result<Expr, ExprError> {
    Expr::parse(src)
}

/// Partial derivative of `e` with respect to `v`.
pub fn diff(e: &Expr, v: Var) -> Expr {
    e.diff(v)
}
