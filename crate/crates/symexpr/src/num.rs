//! Tagged numeric values: exact rationals or IEEE doubles.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A number that is either an exact rational or a float.
///
/// The variant doubles as the exactness flag: any arithmetic that touches a
/// `Float` produces a `Float`.
#[derive(Clone, Debug, PartialEq)]
pub enum NumValue {
    Exact(BigRational),
    Float(f64),
}

impl NumValue {
    pub fn zero() -> Self {
        NumValue::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        NumValue::Exact(BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        NumValue::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        NumValue::Exact(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, NumValue::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            NumValue::Exact(q) => Some(q),
            NumValue::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            NumValue::Exact(q) => rational_to_f64(q),
            NumValue::Float(v) => *v,
        }
    }

    /// Exact zero test for rationals, bitwise zero test for floats.
    pub fn is_zero(&self) -> bool {
        match self {
            NumValue::Exact(q) => q.is_zero(),
            NumValue::Float(v) => *v == 0.0,
        }
    }

    /// The exact binary value of a float as a rational (exact values pass
    /// through unchanged). Used to run polynomial arithmetic on float data
    /// without further rounding.
    pub fn exactify(&self) -> BigRational {
        match self {
            NumValue::Exact(q) => q.clone(),
            NumValue::Float(v) => BigRational::from_float(*v).unwrap_or_else(BigRational::zero),
        }
    }

    /// Division; `None` on an exact or floating zero divisor.
    pub fn checked_div(&self, other: &NumValue) -> Option<NumValue> {
        if other.is_zero() {
            return None;
        }
        Some(match (self, other) {
            (NumValue::Exact(a), NumValue::Exact(b)) => NumValue::Exact(a / b),
            _ => NumValue::Float(self.to_f64() / other.to_f64()),
        })
    }

    pub fn powi(&self, n: i32) -> Option<NumValue> {
        match self {
            NumValue::Exact(q) => {
                if n < 0 && q.is_zero() {
                    None
                } else {
                    Some(NumValue::Exact(num_traits::pow::Pow::pow(q, n)))
                }
            }
            NumValue::Float(v) => {
                if n < 0 && *v == 0.0 {
                    None
                } else {
                    Some(NumValue::Float(v.powi(n)))
                }
            }
        }
    }

    pub fn abs(&self) -> NumValue {
        match self {
            NumValue::Exact(q) => NumValue::Exact(q.abs()),
            NumValue::Float(v) => NumValue::Float(v.abs()),
        }
    }
}

/// Rational to nearest double, robust for numerators and denominators far
/// outside the f64 range.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = nb - db - 60;
    let scaled = if shift > 0 {
        BigRational::new(q.numer().clone(), q.denom().clone() << (shift as usize))
    } else {
        BigRational::new(q.numer().clone() << ((-shift) as usize), q.denom().clone())
    };
    let mant = scaled.to_integer().to_f64().unwrap_or(0.0);
    mant * 2f64.powi(shift as i32)
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for NumValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumValue::Exact(q) => f.write_str(&fmt_rational(q)),
            NumValue::Float(v) => write!(f, "{v:e}"),
        }
    }
}

impl From<BigRational> for NumValue {
    fn from(q: BigRational) -> Self {
        NumValue::Exact(q)
    }
}

impl From<f64> for NumValue {
    fn from(v: f64) -> Self {
        NumValue::Float(v)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for &NumValue {
            type Output = NumValue;
            fn $m(self, rhs: &NumValue) -> NumValue {
                match (self, rhs) {
                    (NumValue::Exact(a), NumValue::Exact(b)) => NumValue::Exact(a $op b),
                    _ => NumValue::Float(self.to_f64() $op rhs.to_f64()),
                }
            }
        }
        impl $tr for NumValue {
            type Output = NumValue;
            fn $m(self, rhs: NumValue) -> NumValue {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Neg for &NumValue {
    type Output = NumValue;
    fn neg(self) -> NumValue {
        match self {
            NumValue::Exact(q) => NumValue::Exact(-q),
            NumValue::Float(v) => NumValue::Float(-v),
        }
    }
}

impl Neg for NumValue {
    type Output = NumValue;
    fn neg(self) -> NumValue {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_stays_exact() {
        let a = NumValue::ratio(1, 3);
        let b = NumValue::ratio(2, 3);
        assert_eq!(&a + &b, NumValue::one());
        assert!((&a * &b).is_exact());
    }

    #[test]
    fn float_demotes() {
        let a = NumValue::ratio(1, 2);
        let b = NumValue::Float(0.25);
        let c = &a + &b;
        assert!(!c.is_exact());
        assert_eq!(c.to_f64(), 0.75);
    }

    #[test]
    fn huge_rational_to_float() {
        let big = BigInt::from(10).pow(400u32);
        let q = BigRational::new(big.clone() * BigInt::from(3), big);
        assert!((rational_to_f64(&q) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn division_by_zero_is_none() {
        assert!(NumValue::one().checked_div(&NumValue::zero()).is_none());
        assert!(NumValue::one().checked_div(&NumValue::Float(0.0)).is_none());
    }
}
