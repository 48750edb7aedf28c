//! Conservative simplification: constant folding, 0/1 identities and
//! collection of like terms and like factors.
//!
//! Expressions are flattened into sums of monomials `q·∏ aᵢ^{kᵢ}` whose atoms
//! are variables, function calls and (when expansion would be too large)
//! irreducible sums. Products of small sums are expanded so that cancellations
//! across terms become visible. No trigonometric or logarithmic rewriting is
//! attempted.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::expr::{Expr, Node};

const EXPANSION_LIMIT: usize = 256;

#[derive(Clone, Debug)]
struct Monomial {
    coef: BigRational,
    factors: BTreeMap<String, (Expr, i32)>,
}

impl Monomial {
    fn constant(q: BigRational) -> Self {
        Monomial { coef: q, factors: BTreeMap::new() }
    }

    fn atom(e: Expr) -> Self {
        let mut factors = BTreeMap::new();
        factors.insert(e.to_string(), (e, 1));
        Monomial { coef: BigRational::one(), factors }
    }

    fn key(&self) -> String {
        self.factors.iter().map(|(k, (_, n))| format!("[{k}]^{n}")).collect::<Vec<_>>().join("*")
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut factors = self.factors.clone();
        for (k, (e, n)) in &other.factors {
            let entry = factors.entry(k.clone()).or_insert((e.clone(), 0));
            entry.1 += n;
            if entry.1 == 0 {
                factors.remove(k);
            }
        }
        Monomial { coef: &self.coef * &other.coef, factors }
    }

    fn powi(&self, n: i32) -> Monomial {
        Monomial {
            coef: num_traits::pow::Pow::pow(&self.coef, n),
            factors: self.factors.iter().map(|(k, (e, m))| (k.clone(), (e.clone(), m * n))).collect(),
        }
    }
}

#[derive(Clone, Debug, Default)]
struct Sum(BTreeMap<String, Monomial>);

impl Sum {
    fn from_monomial(m: Monomial) -> Sum {
        let mut s = Sum::default();
        s.push(m);
        s
    }

    fn push(&mut self, m: Monomial) {
        if m.coef.is_zero() {
            return;
        }
        let key = m.key();
        match self.0.get_mut(&key) {
            Some(existing) => {
                existing.coef += m.coef;
                if existing.coef.is_zero() {
                    self.0.remove(&key);
                }
            }
            None => {
                self.0.insert(key, m);
            }
        }
    }

    fn add(mut self, other: Sum, sign: i32) -> Sum {
        for (_, mut m) in other.0 {
            if sign < 0 {
                m.coef = -m.coef;
            }
            self.push(m);
        }
        self
    }

    fn mul(&self, other: &Sum) -> Sum {
        let mut out = Sum::default();
        for a in self.0.values() {
            for b in other.0.values() {
                out.push(a.mul(b));
            }
        }
        out
    }

    fn single(&self) -> Option<&Monomial> {
        if self.0.len() == 1 {
            self.0.values().next()
        } else {
            None
        }
    }

    fn len(&self) -> usize {
        self.0.len()
    }
}

fn as_sum(e: &Expr) -> Sum {
    match e.node() {
        Node::Const(q) => Sum::from_monomial(Monomial::constant(q.clone())),
        Node::Var(_) => Sum::from_monomial(Monomial::atom(e.clone())),
        Node::Add(a, b) => as_sum(a).add(as_sum(b), 1),
        Node::Sub(a, b) => as_sum(a).add(as_sum(b), -1),
        Node::Neg(a) => Sum::default().add(as_sum(a), -1),
        Node::Mul(a, b) => product(&as_sum(a), &as_sum(b)),
        Node::Div(a, b) => {
            let num = as_sum(a);
            let den = as_sum(b);
            match den.single() {
                Some(m) if !m.coef.is_zero() => product(&num, &Sum::from_monomial(m.powi(-1))),
                _ => product(&num, &Sum::from_monomial(Monomial::atom(rebuild(&den)).powi(-1))),
            }
        }
        Node::Pow(a, n) => {
            let base = as_sum(a);
            if let Some(m) = base.single() {
                if !(m.coef.is_zero() && *n < 0) {
                    return Sum::from_monomial(m.powi(*n));
                }
            }
            if *n >= 0 && base.len().saturating_pow(*n as u32) <= EXPANSION_LIMIT {
                let mut acc = Sum::from_monomial(Monomial::constant(BigRational::one()));
                for _ in 0..*n {
                    acc = acc.mul(&base);
                }
                return acc;
            }
            Sum::from_monomial(Monomial::atom(sum_atom(&base)).powi(*n))
        }
        Node::Func(f, a) => {
            let arg = rebuild(&as_sum(a));
            let folded = Expr::func(*f, &arg);
            match folded.as_const() {
                Some(q) => Sum::from_monomial(Monomial::constant(q.clone())),
                None => Sum::from_monomial(Monomial::atom(folded)),
            }
        }
    }
}

fn sum_atom(s: &Sum) -> Expr {
    rebuild(s)
}

/// A multi-term sum meeting its own reciprocal cancels as an atom.
fn cancel_reciprocal(sum: &Sum, other: &Sum) -> Option<Sum> {
    let m = other.single()?;
    if sum.len() < 2 {
        return None;
    }
    let atom = rebuild(sum);
    let key = atom.to_string();
    m.factors.get(&key).filter(|(_, n)| *n < 0)?;
    Some(Sum::from_monomial(Monomial::atom(atom).mul(m)))
}

fn product(a: &Sum, b: &Sum) -> Sum {
    if let Some(s) = cancel_reciprocal(a, b).or_else(|| cancel_reciprocal(b, a)) {
        return s;
    }
    if a.len() * b.len() <= EXPANSION_LIMIT {
        return a.mul(b);
    }
    let (ea, eb) = (sum_atom(a), sum_atom(b));
    Sum::from_monomial(Monomial::atom(ea).mul(&Monomial::atom(eb)))
}

fn rebuild_monomial(m: &Monomial) -> (bool, Expr) {
    let mut num = Expr::one();
    let mut den = Expr::one();
    for (e, n) in m.factors.values() {
        if *n > 0 {
            num = Expr::mul(&num, &Expr::pow(e, *n));
        } else {
            den = Expr::mul(&den, &Expr::pow(e, -*n));
        }
    }
    let negative = m.coef.is_negative();
    let c = m.coef.abs();
    let cnum = Expr::constant(BigRational::from_integer(c.numer().clone()));
    let cden = Expr::constant(BigRational::from_integer(c.denom().clone()));
    let body = Expr::div(&Expr::mul(&cnum, &num), &Expr::mul(&cden, &den));
    (negative, body)
}

fn rebuild(s: &Sum) -> Expr {
    let mut out: Option<Expr> = None;
    for m in s.0.values() {
        let (neg, body) = rebuild_monomial(m);
        out = Some(match out {
            None => {
                if neg {
                    Expr::neg(&body)
                } else {
                    body
                }
            }
            Some(acc) => {
                if neg {
                    Expr::sub(&acc, &body)
                } else {
                    Expr::add(&acc, &body)
                }
            }
        });
    }
    out.unwrap_or_else(Expr::zero)
}

/// Returns a value-equal expression with like terms collected.
pub fn simplify(e: &Expr) -> Expr {
    rebuild(&as_sum(e))
}
