//! Univariate polynomials in the base `s` over a coefficient ring.

use std::fmt;

use jetalg::{JetError, JetPoly, RAlg, RValues};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use symexpr::NumValue;

/// Coefficient rings used by [`SPoly`].
pub trait Coeff: Clone + PartialEq + fmt::Display {
    fn zero() -> Self;
    fn from_int(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;

    /// `self += a·b`.
    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self = self.add(&a.mul(b));
    }
}

impl Coeff for RAlg {
    fn zero() -> Self {
        RAlg::zero()
    }
    fn from_int(n: i64) -> Self {
        RAlg::int(n)
    }
    fn is_zero(&self) -> bool {
        RAlg::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        for (m, p) in a.terms() {
            for (n, q) in b.terms() {
                self.add_term(m.mul(n), p * q);
            }
        }
    }
}

impl Coeff for NumValue {
    fn zero() -> Self {
        NumValue::zero()
    }
    fn from_int(n: i64) -> Self {
        NumValue::int(n)
    }
    fn is_zero(&self) -> bool {
        NumValue::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

/// `Σ cᵢ sⁱ`, stored without trailing zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct SPoly<T> {
    coeffs: Vec<T>,
}

/// A polynomial in `s` with symbolic coefficients.
pub type SymPoly = SPoly<RAlg>;
/// A polynomial in `s` with numeric coefficients.
pub type NumPoly = SPoly<NumValue>;

impl<T: Coeff> SPoly<T> {
    pub fn new(mut coeffs: Vec<T>) -> SPoly<T> {
        while coeffs.last().is_some_and(Coeff::is_zero) {
            coeffs.pop();
        }
        SPoly { coeffs }
    }

    pub fn zero() -> SPoly<T> {
        SPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> SPoly<T> {
        SPoly::new(vec![c])
    }

    /// The monomial `c·sᵏ`.
    pub fn monomial(c: T, k: usize) -> SPoly<T> {
        let mut v = vec![T::zero(); k];
        v.push(c);
        SPoly::new(v)
    }

    /// The polynomial `s`.
    pub fn s() -> SPoly<T> {
        SPoly::monomial(T::from_int(1), 1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &SPoly<T>) -> SPoly<T> {
        let n = self.coeffs.len().max(other.coeffs.len());
        SPoly::new((0..n).map(|k| self.coeff(k).add(&other.coeff(k))).collect())
    }

    pub fn sub(&self, other: &SPoly<T>) -> SPoly<T> {
        let n = self.coeffs.len().max(other.coeffs.len());
        SPoly::new((0..n).map(|k| self.coeff(k).sub(&other.coeff(k))).collect())
    }

    pub fn neg(&self) -> SPoly<T> {
        SPoly::zero().sub(self)
    }

    pub fn mul(&self, other: &SPoly<T>) -> SPoly<T> {
        if self.is_zero() || other.is_zero() {
            return SPoly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j].add_mul(a, b);
                }
            }
        }
        SPoly::new(out)
    }

    pub fn scale(&self, c: &T) -> SPoly<T> {
        SPoly::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    /// `d/ds`.
    pub fn ds(&self) -> SPoly<T> {
        SPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(k, a)| a.mul(&T::from_int(k as i64))).collect())
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> SPoly<U> {
        SPoly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn try_map<U: Coeff, E>(&self, f: impl Fn(&T) -> Result<U, E>) -> Result<SPoly<U>, E> {
        Ok(SPoly::new(self.coeffs.iter().map(f).collect::<Result<_, _>>()?))
    }

    /// Horner evaluation.
    pub fn eval(&self, s: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc.mul(s).add(c))
    }
}

impl SymPoly {
    /// Reads the coefficients of a polynomial in `s` alone.
    pub fn from_jet(p: &JetPoly) -> Option<SymPoly> {
        p.as_s_poly().map(SPoly::new)
    }

    pub fn to_jet(&self) -> JetPoly {
        JetPoly::from_s_poly(&self.coeffs)
    }

    /// Coefficientwise covariant derivative `∇_i`, holding `s` fixed.
    pub fn nabla(&self, i: u8) -> SymPoly {
        self.map(|c| c.derive(i))
    }

    pub fn bind(&self, values: &RValues) -> Result<NumPoly, JetError> {
        self.try_map(|c| c.eval(values))
    }

    /// The image under the exchange of directions, `s ↦ −s`, `R_w ↦ −R_{σw}`.
    pub fn mirror(&self) -> SymPoly {
        SPoly::new(
            self.coeffs.iter().enumerate().map(|(k, c)| if k % 2 == 1 { -c.mirror() } else { c.mirror() }).collect(),
        )
    }
}

impl NumPoly {
    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(NumValue::is_exact)
    }

    /// Exact rational coefficients, when every coefficient is exact.
    pub fn exact_coeffs(&self) -> Option<Vec<BigRational>> {
        self.coeffs.iter().map(|c| c.as_exact().cloned()).collect()
    }

    /// Divides by the rational content (positive, so the leading sign is kept).
    /// Float polynomials are scaled to unit max-norm instead.
    pub fn primitive(&self) -> NumPoly {
        if self.is_zero() {
            return self.clone();
        }
        match self.exact_coeffs() {
            Some(q) => {
                let content = rational_content(&q);
                SPoly::new(q.into_iter().map(|c| NumValue::Exact(c / &content)).collect())
            }
            None => {
                let m = self.coeffs.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max);
                SPoly::new(self.coeffs.iter().map(|c| NumValue::Float(c.to_f64() / m)).collect())
            }
        }
    }
}

/// `gcd(numerators) / lcm(denominators)` of the nonzero entries.
pub fn rational_content(q: &[BigRational]) -> BigRational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for c in q.iter().filter(|c| !c.is_zero()) {
        num = num.gcd(c.numer());
        den = den.lcm(c.denom());
    }
    if num.is_zero() {
        return BigRational::one();
    }
    BigRational::new(num.abs(), den)
}

impl<T: Coeff> fmt::Display for SPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*s")?,
                _ => write!(f, "({c})*s^{k}")?,
            }
        }
        Ok(())
    }
}
