//! Roots with multiplicities.
//!
//! Exact polynomials are split by their squarefree decomposition. Each factor
//! is solved numerically through its companion matrix, the approximations are
//! polished by Newton's method, and every real approximation is tested for a
//! nearby rational root `a/b` with `b | lc` and `a | c₀`, which is then
//! confirmed by exact evaluation and divided out.

use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use symexpr::{fmt_rational, rational_to_f64};

use crate::dense;
use crate::error::PolyError;
use crate::gcd::{squarefree_decomposition, squarefree_part};
use crate::qpoly::QPoly;

/// Target accuracy of numerically isolated roots.
pub const ROOT_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum RootValue {
    Rational(BigRational),
    Real(f64),
    Complex(Complex64),
}

impl RootValue {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            RootValue::Rational(q) => Complex64::new(rational_to_f64(q), 0.0),
            RootValue::Real(x) => Complex64::new(*x, 0.0),
            RootValue::Complex(z) => *z,
        }
    }

    pub fn is_real(&self) -> bool {
        !matches!(self, RootValue::Complex(_))
    }
}

impl fmt::Display for RootValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootValue::Rational(q) => f.write_str(&fmt_rational(q)),
            RootValue::Real(x) => write!(f, "{x:.15e}"),
            RootValue::Complex(z) => write!(f, "{:.15e}{:+.15e}i", z.re, z.im),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Root {
    pub value: RootValue,
    pub multiplicity: usize,
}

/// All roots of a nonconstant polynomial, rational ones first in increasing
/// order, then real, then complex.
pub fn roots(p: &QPoly) -> Result<Vec<Root>, PolyError> {
    match p.degree() {
        None => return Err(PolyError::ZeroInput("roots")),
        Some(0) => return Err(PolyError::Constant("roots")),
        _ => {}
    }
    let mut out = Vec::new();
    match squarefree_decomposition(p) {
        Some(factors) => {
            for (f, mult) in factors {
                let f = f.exact_coeffs().expect("exact factor");
                for value in exact_factor_roots(&f)? {
                    out.push(Root { value, multiplicity: mult });
                }
            }
        }
        None => out = float_roots(p)?,
    }
    out.sort_by(|a, b| order_key(&a.value).partial_cmp(&order_key(&b.value)).expect("finite roots"));
    Ok(out)
}

fn order_key(v: &RootValue) -> (u8, f64, f64) {
    match v {
        RootValue::Rational(q) => (0, rational_to_f64(q), 0.0),
        RootValue::Real(x) => (1, *x, 0.0),
        RootValue::Complex(z) => (2, z.re, z.im),
    }
}

fn exact_factor_roots(f: &[BigRational]) -> Result<Vec<RootValue>, PolyError> {
    let mut rest = f.to_vec();
    let mut out = Vec::new();
    if rest[0].is_zero() {
        out.push(RootValue::Rational(BigRational::zero()));
        rest = dense::div_exact(&rest, &[BigRational::zero(), BigRational::one()]);
    }
    loop {
        if dense::degree(&rest).unwrap_or(0) == 0 {
            return Ok(out);
        }
        let approx = polished_roots(&scaled_f64(&rest))?;
        let found = approx.iter().filter(|z| is_real(z)).find_map(|z| rational_candidate(&rest, z.re));
        match found {
            Some(r) => {
                rest = dense::div_exact(&rest, &[-r.clone(), BigRational::one()]);
                out.push(RootValue::Rational(r));
            }
            None => {
                out.extend(approx.into_iter().map(classify));
                return Ok(out);
            }
        }
    }
}

fn is_real(z: &Complex64) -> bool {
    z.im.abs() <= 1e-7 * z.norm().max(1.0)
}

fn classify(z: Complex64) -> RootValue {
    if z.im.abs() <= ROOT_TOL * z.norm().max(1.0) {
        RootValue::Real(z.re)
    } else {
        RootValue::Complex(z)
    }
}

/// Coefficients scaled so the largest has magnitude one.
fn scaled_f64(f: &[BigRational]) -> Vec<f64> {
    let big = f.iter().map(|c| c.abs()).max().expect("nonzero polynomial");
    f.iter().map(|c| rational_to_f64(&(c / &big))).collect()
}

/// A rational root of `f` close to `x`, found among the continued-fraction
/// convergents of `x` allowed by the rational root test.
fn rational_candidate(f: &[BigRational], x: f64) -> Option<BigRational> {
    let ints = dense::to_primitive_ints(f);
    let lead = ints.last()?.abs();
    let constant = ints[0].abs();
    let mut value = x;
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    for _ in 0..64 {
        let a = BigInt::from(value.floor().to_i64()?);
        let h = &a * &h1 + &h0;
        let k = &a * &k1 + &k0;
        if k > lead {
            return None;
        }
        let candidate = BigRational::new(h.clone(), k.clone());
        if lead.is_multiple_of(candidate.denom())
            && constant.is_multiple_of(&candidate.numer().abs())
            && dense::eval(f, &candidate).is_zero()
        {
            return Some(candidate);
        }
        let frac = value - value.floor();
        if frac.abs() < 1e-15 {
            return None;
        }
        value = 1.0 / frac;
        (h0, h1, k0, k1) = (h1, h, k1, k);
    }
    None
}

pub(crate) fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Companion-matrix eigenvalues refined by Newton's method.
pub(crate) fn polished_roots(c: &[f64]) -> Result<Vec<Complex64>, PolyError> {
    let n = c.len() - 1;
    let lead = c[n];
    let companion = DMatrix::from_fn(n, n, |i, j| {
        if i == 0 {
            -c[n - 1 - j] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let mut out = Vec::with_capacity(n);
    for z0 in companion.complex_eigenvalues().iter() {
        let mut z = *z0;
        for _ in 0..100 {
            let (p, dp) = horner(c, z);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            z -= step;
            if step.norm() <= 1e-16 * z.norm().max(1.0) {
                break;
            }
        }
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(PolyError::NoConvergence(format!("{z0}")));
        }
        out.push(z);
    }
    Ok(out)
}

/// Roots of a float polynomial: the squarefree part is solved, and each
/// root's multiplicity is the number of eigenvalues of the full polynomial
/// nearest to it.
fn float_roots(p: &QPoly) -> Result<Vec<Root>, PolyError> {
    let part = squarefree_part(p)?;
    if part.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let distinct = polished_roots(&part.f64_coeffs())?;
    let mut mult = vec![0usize; distinct.len()];
    for z in polished_roots(&p.f64_coeffs())? {
        let nearest = (0..distinct.len())
            .min_by(|&a, &b| (distinct[a] - z).norm().total_cmp(&(distinct[b] - z).norm()))
            .expect("nonempty");
        mult[nearest] += 1;
    }
    Ok(distinct.into_iter().zip(mult).map(|(z, m)| Root { value: classify(z), multiplicity: m.max(1) }).collect())
}
