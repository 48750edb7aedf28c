//! Expression DAG over the plane coordinates `x`, `y`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::ExprError;
use crate::num::fmt_rational;
use crate::syntax::{parse_ast, Ast, BinOp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Arctan,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Arctan => "arctan",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "log" | "ln" => Func::Log,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "arctan" | "atan" => Func::Arctan,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

#[derive(Debug, PartialEq)]
pub enum Node {
    Const(BigRational),
    Var(Var),
    Add(Expr, Expr),
    Sub(Expr, Expr),
    Mul(Expr, Expr),
    Div(Expr, Expr),
    Neg(Expr),
    Pow(Expr, i32),
    Func(Func, Expr),
}

/// Immutable, cheaply clonable expression handle. Subexpressions are shared,
/// so derivatives of large expressions stay compact.
#[derive(Clone, Debug)]
pub struct Expr(Arc<Node>);

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Expr {
    pub fn node(&self) -> &Node {
        &self.0
    }

    /// Address of the shared node, stable while any clone is alive.
    pub fn id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn ptr_eq(&self, other: &Expr) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    fn new(n: Node) -> Expr {
        Expr(Arc::new(n))
    }

    pub fn constant(q: BigRational) -> Expr {
        Expr::new(Node::Const(q))
    }

    pub fn int(n: i64) -> Expr {
        Expr::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Expr {
        Expr::constant(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn var(v: Var) -> Expr {
        Expr::new(Node::Var(v))
    }

    pub fn x() -> Expr {
        Expr::var(Var::X)
    }

    pub fn y() -> Expr {
        Expr::var(Var::Y)
    }

    pub fn as_const(&self) -> Option<&BigRational> {
        match self.node() {
            Node::Const(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(|q| q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_const().is_some_and(|q| q.is_one())
    }

    /// Node constructors without any folding; the parser uses these so that
    /// the tree mirrors the source text.
    pub fn raw_add(a: Expr, b: Expr) -> Expr {
        Expr::new(Node::Add(a, b))
    }
    pub fn raw_sub(a: Expr, b: Expr) -> Expr {
        Expr::new(Node::Sub(a, b))
    }
    pub fn raw_mul(a: Expr, b: Expr) -> Expr {
        Expr::new(Node::Mul(a, b))
    }
    pub fn raw_div(a: Expr, b: Expr) -> Expr {
        Expr::new(Node::Div(a, b))
    }
    pub fn raw_neg(a: Expr) -> Expr {
        Expr::new(Node::Neg(a))
    }
    pub fn raw_pow(a: Expr, n: i32) -> Expr {
        Expr::new(Node::Pow(a, n))
    }
    pub fn raw_func(f: Func, a: Expr) -> Expr {
        Expr::new(Node::Func(f, a))
    }

    /// Folding constructors: constant folding and 0/1 identities only.
    pub fn add(a: &Expr, b: &Expr) -> Expr {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        if let (Some(p), Some(q)) = (a.as_const(), b.as_const()) {
            return Expr::constant(p + q);
        }
        if let Node::Neg(inner) = b.node() {
            return Expr::sub(a, inner);
        }
        Expr::raw_add(a.clone(), b.clone())
    }

    pub fn sub(a: &Expr, b: &Expr) -> Expr {
        if b.is_zero() {
            return a.clone();
        }
        if a.is_zero() {
            return Expr::neg(b);
        }
        if let (Some(p), Some(q)) = (a.as_const(), b.as_const()) {
            return Expr::constant(p - q);
        }
        if a.ptr_eq(b) {
            return Expr::zero();
        }
        if let Node::Neg(inner) = b.node() {
            return Expr::add(a, inner);
        }
        Expr::raw_sub(a.clone(), b.clone())
    }

    pub fn mul(a: &Expr, b: &Expr) -> Expr {
        if a.is_zero() || b.is_zero() {
            return Expr::zero();
        }
        if a.is_one() {
            return b.clone();
        }
        if b.is_one() {
            return a.clone();
        }
        if let (Some(p), Some(q)) = (a.as_const(), b.as_const()) {
            return Expr::constant(p * q);
        }
        if a.as_const().is_some_and(|q| *q == -BigRational::one()) {
            return Expr::neg(b);
        }
        if b.as_const().is_some_and(|q| *q == -BigRational::one()) {
            return Expr::neg(a);
        }
        Expr::raw_mul(a.clone(), b.clone())
    }

    /// Division; `0/b` folds to `0`, which is value preserving wherever the
    /// quotient is defined.
    pub fn div(a: &Expr, b: &Expr) -> Expr {
        if a.is_zero() {
            return Expr::zero();
        }
        if b.is_one() {
            return a.clone();
        }
        if let (Some(p), Some(q)) = (a.as_const(), b.as_const()) {
            if !q.is_zero() {
                return Expr::constant(p / q);
            }
        }
        Expr::raw_div(a.clone(), b.clone())
    }

    pub fn neg(a: &Expr) -> Expr {
        match a.node() {
            Node::Const(q) => Expr::constant(-q),
            Node::Neg(inner) => inner.clone(),
            _ => Expr::raw_neg(a.clone()),
        }
    }

    pub fn pow(a: &Expr, n: i32) -> Expr {
        if n == 0 {
            return Expr::one();
        }
        if n == 1 {
            return a.clone();
        }
        if let Some(q) = a.as_const() {
            if !(n < 0 && q.is_zero()) {
                return Expr::constant(num_traits::pow::Pow::pow(q, n));
            }
        }
        Expr::raw_pow(a.clone(), n)
    }

    pub fn func(f: Func, a: &Expr) -> Expr {
        if a.is_zero() {
            match f {
                Func::Exp | Func::Cos => return Expr::one(),
                Func::Sin | Func::Arctan | Func::Sqrt => return Expr::zero(),
                Func::Log => {}
            }
        }
        if a.is_one() && f == Func::Log {
            return Expr::zero();
        }
        Expr::raw_func(f, a.clone())
    }

    pub fn exp(&self) -> Expr {
        Expr::func(Func::Exp, self)
    }
    pub fn log(&self) -> Expr {
        Expr::func(Func::Log, self)
    }
    pub fn sin(&self) -> Expr {
        Expr::func(Func::Sin, self)
    }
    pub fn cos(&self) -> Expr {
        Expr::func(Func::Cos, self)
    }
    pub fn arctan(&self) -> Expr {
        Expr::func(Func::Arctan, self)
    }
    pub fn sqrt(&self) -> Expr {
        Expr::func(Func::Sqrt, self)
    }
    pub fn powi(&self, n: i32) -> Expr {
        Expr::pow(self, n)
    }
    pub fn recip(&self) -> Expr {
        Expr::div(&Expr::one(), self)
    }

    /// Parses infix source text (see [`crate::syntax`] for the grammar).
    pub fn parse(src: &str) -> Result<Expr, ExprError> {
        let ast = parse_ast(src)?;
        Expr::from_ast(&ast)
    }

    pub fn from_ast(ast: &Ast) -> Result<Expr, ExprError> {
        Ok(match ast {
            Ast::Num(q) => Expr::constant(q.clone()),
            Ast::Ident { name, pos } => match name.as_str() {
                "x" => Expr::x(),
                "y" => Expr::y(),
                _ => return Err(ExprError::UnknownIdentifier { name: name.clone(), pos: *pos }),
            },
            Ast::Neg(a) => Expr::raw_neg(Expr::from_ast(a)?),
            Ast::Bin(op, a, b) => {
                let (a, b) = (Expr::from_ast(a)?, Expr::from_ast(b)?);
                match op {
                    BinOp::Add => Expr::raw_add(a, b),
                    BinOp::Sub => Expr::raw_sub(a, b),
                    BinOp::Mul => Expr::raw_mul(a, b),
                    BinOp::Div => Expr::raw_div(a, b),
                }
            }
            Ast::Pow(a, n) => Expr::raw_pow(Expr::from_ast(a)?, *n),
            Ast::Call { name, pos, arg } => {
                let f = Func::from_name(name)
                    .ok_or_else(|| ExprError::UnknownIdentifier { name: name.clone(), pos: *pos })?;
                Expr::raw_func(f, Expr::from_ast(arg)?)
            }
        })
    }

    /// Symbolic partial derivative.
    pub fn diff(&self, v: Var) -> Expr {
        Differentiator::new().diff(self, v)
    }

    /// Number of distinct shared nodes.
    pub fn dag_size(&self) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(e) = stack.pop() {
            if !seen.insert(e.id()) {
                continue;
            }
            for c in e.children() {
                stack.push(c.clone());
            }
        }
        seen.len()
    }

    pub fn children(&self) -> Vec<&Expr> {
        match self.node() {
            Node::Const(_) | Node::Var(_) => vec![],
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => vec![a, b],
            Node::Neg(a) | Node::Pow(a, _) | Node::Func(_, a) => vec![a],
        }
    }

    fn prec(&self) -> u8 {
        match self.node() {
            Node::Add(..) | Node::Sub(..) => 1,
            Node::Mul(..) | Node::Div(..) => 2,
            Node::Neg(_) => 3,
            Node::Pow(..) => 4,
            Node::Const(q) if q.is_negative() || !q.is_integer() => 5,
            _ => 5,
        }
    }
}

/// Memoizing differentiator; reusing one instance across related
/// expressions shares the derivative subgraphs.
#[derive(Default)]
pub struct Differentiator {
    memo: HashMap<(usize, Var), Expr>,
    pins: Vec<Expr>,
}

impl Differentiator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn diff(&mut self, e: &Expr, v: Var) -> Expr {
        if let Some(d) = self.memo.get(&(e.id(), v)) {
            return d.clone();
        }
        let d = match e.node() {
            Node::Const(_) => Expr::zero(),
            Node::Var(w) => {
                if *w == v {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Node::Add(a, b) => {
                let (da, db) = (self.diff(a, v), self.diff(b, v));
                Expr::add(&da, &db)
            }
            Node::Sub(a, b) => {
                let (da, db) = (self.diff(a, v), self.diff(b, v));
                Expr::sub(&da, &db)
            }
            Node::Neg(a) => Expr::neg(&self.diff(a, v)),
            Node::Mul(a, b) => {
                let (da, db) = (self.diff(a, v), self.diff(b, v));
                Expr::add(&Expr::mul(&da, b), &Expr::mul(a, &db))
            }
            Node::Div(a, b) => {
                // (a/b)' = (a' - (a/b) b') / b
                let (da, db) = (self.diff(a, v), self.diff(b, v));
                Expr::div(&Expr::sub(&da, &Expr::mul(e, &db)), b)
            }
            Node::Pow(a, n) => {
                let da = self.diff(a, v);
                let k = Expr::int(*n as i64);
                Expr::mul(&Expr::mul(&k, &Expr::pow(a, n - 1)), &da)
            }
            Node::Func(f, a) => {
                let da = self.diff(a, v);
                if da.is_zero() {
                    Expr::zero()
                } else {
                    match f {
                        Func::Exp => Expr::mul(e, &da),
                        Func::Log => Expr::div(&da, a),
                        Func::Sin => Expr::mul(&a.cos(), &da),
                        Func::Cos => Expr::neg(&Expr::mul(&a.sin(), &da)),
                        Func::Arctan => Expr::div(&da, &Expr::add(&Expr::one(), &Expr::pow(a, 2))),
                        Func::Sqrt => Expr::div(&da, &Expr::mul(&Expr::int(2), e)),
                    }
                }
            }
        };
        self.pins.push(e.clone());
        self.memo.insert((e.id(), v), d.clone());
        d
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

fn print(e: &Expr) -> String {
    match e.node() {
        Node::Const(q) => {
            if q.is_integer() && !q.is_negative() {
                fmt_rational(q)
            } else {
                format!("({})", fmt_rational(q))
            }
        }
        Node::Var(v) => v.name().to_string(),
        Node::Add(a, b) => format!("{} + {}", print(a), print_rhs(b, 1)),
        Node::Sub(a, b) => format!("{} - {}", print(a), print_rhs(b, 1)),
        Node::Mul(a, b) => format!("{}*{}", print_lhs(a, 2), print_rhs(b, 2)),
        Node::Div(a, b) => {
            let l = print_lhs(a, 2);
            let mut r = print_rhs(b, 2);
            let int_rhs = b.as_const().is_some_and(|q| q.is_integer() && !q.is_negative());
            if int_rhs && l.ends_with(|c: char| c.is_ascii_digit()) {
                r = format!("({r})");
            }
            format!("{l}/{r}")
        }
        Node::Neg(a) => {
            let inner = print(a);
            if a.prec() <= 2 || a.as_const().is_some() {
                format!("-({inner})")
            } else {
                format!("-{inner}")
            }
        }
        Node::Pow(a, n) => {
            let atomic = match a.node() {
                Node::Var(_) | Node::Func(..) => true,
                Node::Const(q) => q.is_integer() && !q.is_negative(),
                _ => false,
            };
            let base = if atomic || (a.as_const().is_some()) { print(a) } else { format!("({})", print(a)) };
            if *n < 0 {
                format!("{base}^({n})")
            } else {
                format!("{base}^{n}")
            }
        }
        Node::Func(func, a) => format!("{}({})", func.name(), print(a)),
    }
}

fn print_lhs(e: &Expr, prec: u8) -> String {
    if e.prec() < prec {
        format!("({})", print(e))
    } else {
        print(e)
    }
}

fn print_rhs(e: &Expr, prec: u8) -> String {
    if e.prec() <= prec || matches!(e.node(), Node::Neg(_)) {
        format!("({})", print(e))
    } else {
        print(e)
    }
}

macro_rules! expr_op {
    ($tr:ident, $m:ident, $ctor:path) => {
        impl $tr<&Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                $ctor(self, rhs)
            }
        }
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                $ctor(&self, &rhs)
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                $ctor(&self, rhs)
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                $ctor(self, &rhs)
            }
        }
    };
}

expr_op!(Add, add, Expr::add);
expr_op!(Sub, sub, Expr::sub);
expr_op!(Mul, mul, Expr::mul);
expr_op!(Div, div, Expr::div);

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(src: &str) {
        let e = Expr::parse(src).unwrap();
        let printed = e.to_string();
        let back = Expr::parse(&printed).unwrap();
        assert_eq!(e, back, "{src} -> {printed}");
    }

    #[test]
    fn roundtrips() {
        for s in [
            "(x+y)*exp(-x)",
            "log(x) + (1/2)*log((x^2+y^2)/x^2) + arctan(y/x)",
            "x - (y - x)",
            "-x^2",
            "(-x)^2",
            "-3^2",
            "(-3)^2",
            "x*1/(2)",
            "1/2/3",
            "--x",
            "x^(-2)",
            "-(3)",
            "sqrt(x)*cos(y) - sin(x)/y",
        ] {
            roundtrip(s);
        }
    }

    #[test]
    fn unknown_identifier() {
        assert_eq!(Expr::parse("x + z"), Err(ExprError::UnknownIdentifier { name: "z".into(), pos: 4 }));
        assert!(matches!(Expr::parse("foo(x)"), Err(ExprError::UnknownIdentifier { .. })));
    }

    #[test]
    fn derivative_of_constant_and_product() {
        assert!(Expr::int(5).diff(Var::X).is_zero());
        let e = Expr::parse("x*y").unwrap();
        assert_eq!(e.diff(Var::Y), Expr::x());
    }
}
