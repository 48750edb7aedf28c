//! Point evaluation of expression DAGs.
//!
//! Expressions are compiled into a flat tape (one slot per shared node) so
//! repeated evaluation of large derivative graphs is cheap.
//!
//! Exact evaluation works in the ring of finite sums `Σ qᵢ·e^{rᵢ}` with
//! rational `qᵢ, rᵢ`. Distinct exponentials of rationals are linearly
//! independent over the rationals, so zero tests in this ring are exact. A
//! result is reported exact when it collapses to a plain rational; anything
//! that leaves the ring (a logarithm of 2, a division by a two-term sum, ...)
//! falls back to floating point and the result is flagged inexact.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::ExprError;
use crate::expr::{Expr, Func, Node, Var};
use crate::num::{rational_to_f64, NumValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalMode {
    Exact,
    Float,
}

/// Element of `Q[e^Q]`: sorted by exponent, no zero coefficients.
#[derive(Clone, Debug, PartialEq)]
struct ExpPoly(Vec<(BigRational, BigRational)>);

impl ExpPoly {
    fn rational(q: BigRational) -> Self {
        if q.is_zero() {
            ExpPoly(vec![])
        } else {
            ExpPoly(vec![(BigRational::zero(), q)])
        }
    }

    fn exp_of(r: BigRational) -> Self {
        ExpPoly(vec![(r, BigRational::one())])
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn as_rational(&self) -> Option<BigRational> {
        match self.0.as_slice() {
            [] => Some(BigRational::zero()),
            [(r, q)] if r.is_zero() => Some(q.clone()),
            _ => None,
        }
    }

    fn single(&self) -> Option<(&BigRational, &BigRational)> {
        match self.0.as_slice() {
            [(r, q)] => Some((r, q)),
            _ => None,
        }
    }

    fn to_f64(&self) -> f64 {
        self.0.iter().map(|(r, q)| rational_to_f64(q) * rational_to_f64(r).exp()).sum()
    }

    fn add(&self, other: &ExpPoly, sign: bool) -> ExpPoly {
        let mut out: Vec<(BigRational, BigRational)> = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.0, &other.0);
        while i < a.len() || j < b.len() {
            let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
            let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
            if take_a {
                out.push(a[i].clone());
                i += 1;
            } else if take_b {
                let q = if sign { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0.clone(), q));
                j += 1;
            } else {
                let q = if sign { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !q.is_zero() {
                    out.push((a[i].0.clone(), q));
                }
                i += 1;
                j += 1;
            }
        }
        ExpPoly(out)
    }

    fn neg(&self) -> ExpPoly {
        ExpPoly(self.0.iter().map(|(r, q)| (r.clone(), -q)).collect())
    }

    fn mul(&self, other: &ExpPoly) -> ExpPoly {
        let mut acc: Vec<(BigRational, BigRational)> = Vec::new();
        for (ra, qa) in &self.0 {
            for (rb, qb) in &other.0 {
                acc.push((ra + rb, qa * qb));
            }
        }
        acc.sort_by(|x, y| x.0.cmp(&y.0));
        let mut out: Vec<(BigRational, BigRational)> = Vec::with_capacity(acc.len());
        for (r, q) in acc {
            match out.last_mut() {
                Some(last) if last.0 == r => last.1 += q,
                _ => out.push((r, q)),
            }
        }
        out.retain(|(_, q)| !q.is_zero());
        ExpPoly(out)
    }

    /// Inverse of a single-term element.
    fn inverse(&self) -> Option<ExpPoly> {
        let (r, q) = self.single()?;
        Some(ExpPoly(vec![(-r, q.recip())]))
    }

    fn powi(&self, n: i32) -> Option<ExpPoly> {
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut k = n.unsigned_abs();
        let mut result = ExpPoly::rational(BigRational::one());
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&sq);
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq);
            }
        }
        Some(result)
    }
}

#[derive(Clone, Debug)]
enum Val {
    Exact(ExpPoly),
    Float(f64),
}

impl Val {
    fn to_f64(&self) -> f64 {
        match self {
            Val::Exact(p) => p.to_f64(),
            Val::Float(v) => *v,
        }
    }

    fn into_num(self) -> NumValue {
        match self {
            Val::Exact(p) => match p.as_rational() {
                Some(q) => NumValue::Exact(q),
                None => NumValue::Float(p.to_f64()),
            },
            Val::Float(v) => NumValue::Float(v),
        }
    }
}

#[derive(Clone, Debug)]
enum Op {
    Const(BigRational, f64),
    Var(Var),
    Add(usize, usize),
    Sub(usize, usize),
    Mul(usize, usize),
    Div(usize, usize),
    Neg(usize),
    Pow(usize, i32),
    Func(Func, usize),
}

/// A compiled set of expressions sharing one evaluation tape.
#[derive(Clone, Debug)]
pub struct Tape {
    ops: Vec<Op>,
    roots: Vec<usize>,
}

impl Tape {
    /// Compiles the shared DAG of `roots` in topological order.
    pub fn compile(roots: &[Expr]) -> Tape {
        let mut index: HashMap<usize, usize> = HashMap::new();
        let mut ops = Vec::new();
        let mut out_roots = Vec::with_capacity(roots.len());
        for root in roots {
            let mut stack: Vec<(Expr, bool)> = vec![(root.clone(), false)];
            while let Some((e, expanded)) = stack.pop() {
                if index.contains_key(&e.id()) {
                    continue;
                }
                if !expanded {
                    stack.push((e.clone(), true));
                    for c in e.children() {
                        if !index.contains_key(&c.id()) {
                            stack.push((c.clone(), false));
                        }
                    }
                    continue;
                }
                let ix = |c: &Expr| index[&c.id()];
                let op = match e.node() {
                    Node::Const(q) => Op::Const(q.clone(), rational_to_f64(q)),
                    Node::Var(v) => Op::Var(*v),
                    Node::Add(a, b) => Op::Add(ix(a), ix(b)),
                    Node::Sub(a, b) => Op::Sub(ix(a), ix(b)),
                    Node::Mul(a, b) => Op::Mul(ix(a), ix(b)),
                    Node::Div(a, b) => Op::Div(ix(a), ix(b)),
                    Node::Neg(a) => Op::Neg(ix(a)),
                    Node::Pow(a, n) => Op::Pow(ix(a), *n),
                    Node::Func(f, a) => Op::Func(*f, ix(a)),
                };
                index.insert(e.id(), ops.len());
                ops.push(op);
            }
            out_roots.push(index[&root.id()]);
        }
        Tape { ops, roots: out_roots }
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Float evaluation of every root.
    pub fn eval_f64(&self, x: f64, y: f64) -> Result<Vec<f64>, ExprError> {
        let mut slots = vec![0.0f64; self.ops.len()];
        for (i, op) in self.ops.iter().enumerate() {
            let v = match op {
                Op::Const(_, v) => *v,
                Op::Var(Var::X) => x,
                Op::Var(Var::Y) => y,
                Op::Add(a, b) => slots[*a] + slots[*b],
                Op::Sub(a, b) => slots[*a] - slots[*b],
                Op::Mul(a, b) => slots[*a] * slots[*b],
                Op::Div(a, b) => {
                    if slots[*b] == 0.0 {
                        return Err(ExprError::DivisionByZero);
                    }
                    slots[*a] / slots[*b]
                }
                Op::Neg(a) => -slots[*a],
                Op::Pow(a, n) => {
                    if *n < 0 && slots[*a] == 0.0 {
                        return Err(ExprError::DivisionByZero);
                    }
                    slots[*a].powi(*n)
                }
                Op::Func(f, a) => float_func(*f, slots[*a])?,
            };
            if !v.is_finite() {
                return Err(ExprError::NonFinite);
            }
            slots[i] = v;
        }
        Ok(self.roots.iter().map(|&r| slots[r]).collect())
    }

    /// Exact evaluation with per-node float fallback.
    pub fn eval_exact(&self, x: &BigRational, y: &BigRational) -> Result<Vec<NumValue>, ExprError> {
        let mut slots: Vec<Val> = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let v = match op {
                Op::Const(q, _) => Val::Exact(ExpPoly::rational(q.clone())),
                Op::Var(Var::X) => Val::Exact(ExpPoly::rational(x.clone())),
                Op::Var(Var::Y) => Val::Exact(ExpPoly::rational(y.clone())),
                Op::Add(a, b) => exact_bin(&slots[*a], &slots[*b], |p, q| Some(p.add(q, false)), |u, v| Ok(u + v))?,
                Op::Sub(a, b) => exact_bin(&slots[*a], &slots[*b], |p, q| Some(p.add(q, true)), |u, v| Ok(u - v))?,
                Op::Mul(a, b) => exact_bin(&slots[*a], &slots[*b], |p, q| Some(p.mul(q)), |u, v| Ok(u * v))?,
                Op::Div(a, b) => {
                    if let Val::Exact(q) = &slots[*b] {
                        if q.is_zero() {
                            return Err(ExprError::DivisionByZero);
                        }
                    }
                    exact_bin(
                        &slots[*a],
                        &slots[*b],
                        |p, q| q.inverse().map(|qi| p.mul(&qi)),
                        |u, v| {
                            if v == 0.0 {
                                Err(ExprError::DivisionByZero)
                            } else {
                                Ok(u / v)
                            }
                        },
                    )?
                }
                Op::Neg(a) => match &slots[*a] {
                    Val::Exact(p) => Val::Exact(p.neg()),
                    Val::Float(v) => Val::Float(-v),
                },
                Op::Pow(a, n) => match &slots[*a] {
                    Val::Exact(p) => {
                        if *n < 0 && p.is_zero() {
                            return Err(ExprError::DivisionByZero);
                        }
                        match p.powi(*n) {
                            Some(r) => Val::Exact(r),
                            None => Val::Float(p.to_f64().powi(*n)),
                        }
                    }
                    Val::Float(v) => {
                        if *n < 0 && *v == 0.0 {
                            return Err(ExprError::DivisionByZero);
                        }
                        Val::Float(v.powi(*n))
                    }
                },
                Op::Func(f, a) => exact_func(*f, &slots[*a])?,
            };
            if let Val::Float(v) = &v {
                if !v.is_finite() {
                    return Err(ExprError::NonFinite);
                }
            }
            slots.push(v);
        }
        Ok(self.roots.iter().map(|&r| slots[r].clone().into_num()).collect())
    }

    pub fn eval(&self, x: &BigRational, y: &BigRational, mode: EvalMode) -> Result<Vec<NumValue>, ExprError> {
        match mode {
            EvalMode::Exact => self.eval_exact(x, y),
            EvalMode::Float => {
                Ok(self.eval_f64(rational_to_f64(x), rational_to_f64(y))?.into_iter().map(NumValue::Float).collect())
            }
        }
    }
}

fn exact_bin(
    a: &Val,
    b: &Val,
    exact: impl Fn(&ExpPoly, &ExpPoly) -> Option<ExpPoly>,
    float: impl Fn(f64, f64) -> Result<f64, ExprError>,
) -> Result<Val, ExprError> {
    if let (Val::Exact(p), Val::Exact(q)) = (a, b) {
        if let Some(r) = exact(p, q) {
            return Ok(Val::Exact(r));
        }
    }
    Ok(Val::Float(float(a.to_f64(), b.to_f64())?))
}

fn float_func(f: Func, v: f64) -> Result<f64, ExprError> {
    Ok(match f {
        Func::Exp => v.exp(),
        Func::Log => {
            if v <= 0.0 {
                return Err(ExprError::LogDomain);
            }
            v.ln()
        }
        Func::Sin => v.sin(),
        Func::Cos => v.cos(),
        Func::Arctan => v.atan(),
        Func::Sqrt => {
            if v < 0.0 {
                return Err(ExprError::SqrtDomain);
            }
            v.sqrt()
        }
    })
}

fn exact_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer(), q.denom());
    let (rn, rd): (BigInt, BigInt) = (n.sqrt(), d.sqrt());
    (&rn * &rn == *n && &rd * &rd == *d).then(|| BigRational::new(rn, rd))
}

fn exact_func(f: Func, a: &Val) -> Result<Val, ExprError> {
    let p = match a {
        Val::Exact(p) => p,
        Val::Float(v) => return Ok(Val::Float(float_func(f, *v)?)),
    };
    let exact = match f {
        Func::Exp => p.as_rational().map(ExpPoly::exp_of),
        Func::Log => match p.single() {
            Some((_, q)) if !q.is_positive() => return Err(ExprError::LogDomain),
            Some((r, q)) if q.is_one() => Some(ExpPoly::rational(r.clone())),
            None if p.is_zero() => return Err(ExprError::LogDomain),
            _ => None,
        },
        Func::Sin | Func::Arctan => p.is_zero().then(|| ExpPoly::rational(BigRational::zero())),
        Func::Cos => p.is_zero().then(|| ExpPoly::rational(BigRational::one())),
        Func::Sqrt => {
            if p.is_zero() {
                Some(ExpPoly::rational(BigRational::zero()))
            } else {
                match p.single() {
                    Some((_, q)) if q.is_negative() => return Err(ExprError::SqrtDomain),
                    Some((r, q)) => exact_sqrt(q).map(|s| ExpPoly(vec![(r / BigRational::from_integer(2.into()), s)])),
                    None => None,
                }
            }
        }
    };
    match exact {
        Some(e) => Ok(Val::Exact(e)),
        None => Ok(Val::Float(float_func(f, p.to_f64())?)),
    }
}

/// Evaluates a single expression at a rational point.
pub fn eval(e: &Expr, x: &BigRational, y: &BigRational, mode: EvalMode) -> Result<NumValue, ExprError> {
    let tape = Tape::compile(std::slice::from_ref(e));
    Ok(tape.eval(x, y, mode)?.pop().expect("one root"))
}

/// Float evaluation of a single expression.
pub fn eval_f64(e: &Expr, x: f64, y: f64) -> Result<f64, ExprError> {
    let tape = Tape::compile(std::slice::from_ref(e));
    Ok(tape.eval_f64(x, y)?[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn exact_identities() {
        let f = Expr::parse("(x+y)*exp(-x)").unwrap();
        assert_eq!(eval(&f, &q(0, 1), &q(0, 1), EvalMode::Exact).unwrap(), NumValue::zero());
        let g = Expr::parse("log(x) + (1/2)*log((x^2+y^2)/x^2) + arctan(y/x)").unwrap();
        assert_eq!(eval(&g, &q(1, 1), &q(0, 1), EvalMode::Exact).unwrap(), NumValue::zero());
    }

    #[test]
    fn exp_falls_back_to_float() {
        let e = Expr::parse("exp(-x)").unwrap();
        let v = eval(&e, &q(1, 1), &q(0, 1), EvalMode::Exact).unwrap();
        assert!(!v.is_exact());
        assert!((v.to_f64() - 0.367879441).abs() < 1e-9);
    }

    #[test]
    fn cancelling_exponentials_stay_exact() {
        let e = Expr::parse("exp(x)*exp(-x)*y + log(exp(x))").unwrap();
        assert_eq!(eval(&e, &q(1, 3), &q(5, 7), EvalMode::Exact).unwrap(), NumValue::Exact(q(5, 7) + q(1, 3)));
    }

    #[test]
    fn sqrt_of_square() {
        let e = Expr::parse("sqrt(x)").unwrap();
        assert_eq!(eval(&e, &q(9, 4), &q(0, 1), EvalMode::Exact).unwrap(), NumValue::Exact(q(3, 2)));
        assert!(!eval(&e, &q(2, 1), &q(0, 1), EvalMode::Exact).unwrap().is_exact());
    }

    #[test]
    fn domain_errors() {
        let e = Expr::parse("1/x").unwrap();
        assert_eq!(eval(&e, &q(0, 1), &q(0, 1), EvalMode::Exact), Err(ExprError::DivisionByZero));
        assert_eq!(eval(&e, &q(0, 1), &q(0, 1), EvalMode::Float), Err(ExprError::DivisionByZero));
        let l = Expr::parse("log(x)").unwrap();
        assert_eq!(eval(&l, &q(-1, 1), &q(0, 1), EvalMode::Exact), Err(ExprError::LogDomain));
        assert_eq!(eval(&l, &q(0, 1), &q(0, 1), EvalMode::Float), Err(ExprError::LogDomain));
        let s = Expr::parse("sqrt(x)").unwrap();
        assert_eq!(eval(&s, &q(-4, 1), &q(0, 1), EvalMode::Exact), Err(ExprError::SqrtDomain));
    }

    #[test]
    fn two_term_denominator_falls_back() {
        let e = Expr::parse("1/(1 + exp(x))").unwrap();
        let v = eval(&e, &q(1, 1), &q(0, 1), EvalMode::Exact).unwrap();
        assert!(!v.is_exact());
        assert!((v.to_f64() - 1.0 / (1.0 + 1f64.exp())).abs() < 1e-15);
    }
}
