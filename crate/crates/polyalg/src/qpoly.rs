//! The polynomial type.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed};
use symexpr::{fmt_rational, NumValue};

use crate::dense;

/// A polynomial in `s` with rational or float coefficients.
///
/// Exact polynomials are stored as a primitive integer polynomial times a
/// positive rational content, so the leading sign is that of the original.
/// A polynomial with any float coefficient is entirely float and keeps
/// content one.
#[derive(Clone, Debug, PartialEq)]
pub struct QPoly {
    coeffs: Vec<NumValue>,
    content: NumValue,
}

impl QPoly {
    /// Builds from coefficients, lowest degree first.
    pub fn new(coeffs: Vec<NumValue>) -> QPoly {
        if coeffs.iter().all(NumValue::is_exact) {
            let q: Vec<BigRational> = coeffs.into_iter().map(|c| c.exactify()).collect();
            QPoly::from_rationals(q)
        } else {
            QPoly::from_f64(coeffs.iter().map(NumValue::to_f64).collect())
        }
    }

    pub fn from_rationals(coeffs: Vec<BigRational>) -> QPoly {
        let coeffs = dense::trim(coeffs);
        let content = dense::content(&coeffs);
        QPoly {
            coeffs: coeffs.iter().map(|c| NumValue::Exact(c / &content)).collect(),
            content: NumValue::Exact(content),
        }
    }

    pub fn from_ints(coeffs: &[i64]) -> QPoly {
        QPoly::from_rationals(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn from_f64(mut coeffs: Vec<f64>) -> QPoly {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        QPoly { coeffs: coeffs.into_iter().map(NumValue::Float).collect(), content: NumValue::Float(1.0) }
    }

    /// `∏ (s − rᵢ)`.
    pub fn from_roots(roots: &[BigRational]) -> QPoly {
        let p =
            roots.iter().fold(vec![BigRational::one()], |acc, r| dense::mul(&acc, &[-r.clone(), BigRational::one()]));
        QPoly::from_rationals(p)
    }

    pub fn zero() -> QPoly {
        QPoly::from_rationals(Vec::new())
    }

    pub fn one() -> QPoly {
        QPoly::from_ints(&[1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        dense::degree(&self.coeffs)
    }

    pub fn is_exact(&self) -> bool {
        self.content.is_exact()
    }

    /// Coefficients with the content divided out.
    pub fn normalized_coeffs(&self) -> &[NumValue] {
        &self.coeffs
    }

    pub fn content(&self) -> &NumValue {
        &self.content
    }

    /// The coefficients of the polynomial itself, content included.
    pub fn coeffs(&self) -> Vec<NumValue> {
        self.coeffs.iter().map(|c| c * &self.content).collect()
    }

    pub fn coeff(&self, k: usize) -> NumValue {
        self.coeffs.get(k).map_or_else(NumValue::zero, |c| c * &self.content)
    }

    pub fn leading(&self) -> Option<NumValue> {
        self.degree().map(|d| self.coeff(d))
    }

    /// Exact coefficients including content, if the polynomial is exact.
    pub fn exact_coeffs(&self) -> Option<Vec<BigRational>> {
        if !self.is_exact() {
            return None;
        }
        self.coeffs().into_iter().map(|c| c.as_exact().cloned()).collect()
    }

    pub fn f64_coeffs(&self) -> Vec<f64> {
        self.coeffs().iter().map(NumValue::to_f64).collect()
    }

    pub fn eval(&self, s: &NumValue) -> NumValue {
        let v = self.coeffs.iter().rev().fold(NumValue::zero(), |acc, c| &(&acc * s) + c);
        &v * &self.content
    }

    /// The polynomial divided by its leading coefficient; zero stays zero.
    pub fn monic(&self) -> QPoly {
        match self.exact_coeffs() {
            Some(q) => QPoly::from_rationals(dense::monic(&q)),
            None => {
                let c = self.f64_coeffs();
                let lead = c.last().copied().unwrap_or(1.0);
                QPoly::from_f64(c.iter().map(|x| x / lead).collect())
            }
        }
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        match (self.exact_coeffs(), other.exact_coeffs()) {
            (Some(a), Some(b)) => QPoly::from_rationals(dense::mul(&a, &b)),
            _ => {
                let (a, b) = (self.f64_coeffs(), other.f64_coeffs());
                if a.is_empty() || b.is_empty() {
                    return QPoly::from_f64(Vec::new());
                }
                let mut out = vec![0.0; a.len() + b.len() - 1];
                for (i, x) in a.iter().enumerate() {
                    for (j, y) in b.iter().enumerate() {
                        out[i + j] += x * y;
                    }
                }
                QPoly::from_f64(out)
            }
        }
    }

    pub fn derivative(&self) -> QPoly {
        match self.exact_coeffs() {
            Some(q) => QPoly::from_rationals(dense::derivative(&q)),
            None => QPoly::from_f64(self.f64_coeffs().iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect()),
        }
    }

    /// Exact quotient and remainder; `None` for float inputs or a zero divisor.
    pub fn div_rem(&self, other: &QPoly) -> Option<(QPoly, QPoly)> {
        let (a, b) = (self.exact_coeffs()?, other.exact_coeffs()?);
        if b.is_empty() {
            return None;
        }
        let (q, r) = dense::divrem(&a, &b);
        Some((QPoly::from_rationals(q), QPoly::from_rationals(r)))
    }

    /// Float copy of the polynomial.
    pub fn to_float(&self) -> QPoly {
        QPoly::from_f64(self.f64_coeffs())
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (negative, magnitude) = match c {
                NumValue::Exact(q) => (q.is_negative(), fmt_rational(&q.abs())),
                NumValue::Float(v) => (*v < 0.0, format!("{}", v.abs())),
            };
            let sign = match (first, negative) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let var = match k {
                0 => String::new(),
                1 => "s".to_string(),
                _ => format!("s^{k}"),
            };
            let body = match (magnitude.as_str(), var.is_empty()) {
                (m, true) => m.to_string(),
                ("1", false) => var,
                (m, false) => format!("{m}*{var}"),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        Ok(())
    }
}
