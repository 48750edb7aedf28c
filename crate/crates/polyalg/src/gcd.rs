//! Greatest common divisors, squarefree parts and radicals.
//!
//! Exact inputs use the subresultant remainder sequence. Float inputs use the
//! singular values of the Sylvester matrix: the numerical gcd degree is the
//! number of singular values below `rel·σ_max`, and the factor is recovered
//! from the null vector of the cofactor system `p·v − q·u = 0`.
//!
//! The float radical of several polynomials avoids gcd chains. It starts from
//! the roots of the lowest-degree input and keeps those at which every other
//! input has a small relative residual.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::dense;
use crate::error::PolyError;
use crate::qpoly::QPoly;

/// Minimum ratio between the smallest retained singular value and the
/// rank threshold for a float gcd degree to count as certified.
pub const CERTIFIED_GAP: f64 = 100.0;

/// Relative tolerance for float zero tests.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel: 1e-9 }
    }
}

/// Monic gcd with the default tolerance.
pub fn gcd(p: &QPoly, q: &QPoly) -> Result<QPoly, PolyError> {
    gcd_with(p, q, Tolerance::default())
}

/// Monic gcd of `p` and `q`; `gcd(p, 0)` is `p` made monic.
pub fn gcd_with(p: &QPoly, q: &QPoly, tol: Tolerance) -> Result<QPoly, PolyError> {
    if p.is_zero() && q.is_zero() {
        return Err(PolyError::ZeroInput("gcd"));
    }
    if let (Some(a), Some(b)) = (p.exact_coeffs(), q.exact_coeffs()) {
        return Ok(QPoly::from_rationals(dense::gcd(&a, &b)));
    }
    if p.is_zero() || q.is_zero() {
        let nonzero = if p.is_zero() { q } else { p };
        return Ok(nonzero.to_float().monic());
    }
    float_gcd(&p.f64_coeffs(), &q.f64_coeffs(), tol).map(QPoly::from_f64)
}

fn unit(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

/// Columns are shifted copies of `a` (`ka` of them) and `b` (`kb` of them).
fn shifted_columns(a: &[f64], ka: usize, b: &[f64], kb: usize) -> DMatrix<f64> {
    let rows = (a.len() + ka).max(b.len() + kb).saturating_sub(1);
    let mut m = DMatrix::zeros(rows, ka + kb);
    for j in 0..ka {
        for (i, x) in a.iter().enumerate() {
            m[(i + j, j)] = *x;
        }
    }
    for j in 0..kb {
        for (i, x) in b.iter().enumerate() {
            m[(i + j, ka + j)] = *x;
        }
    }
    m
}

fn float_gcd(p: &[f64], q: &[f64], tol: Tolerance) -> Result<Vec<f64>, PolyError> {
    let (n, m) = (p.len() - 1, q.len() - 1);
    if n == 0 || m == 0 {
        return Ok(vec![1.0]);
    }
    let (p, q) = (unit(p), unit(q));
    let mut sigma: Vec<f64> = shifted_columns(&p, m, &q, n).singular_values().iter().copied().collect();
    sigma.sort_by(|a, b| a.total_cmp(b));
    let threshold = tol.rel * sigma.last().copied().unwrap_or(0.0);
    let k = sigma.iter().take_while(|&&s| s <= threshold).count();
    if let Some(&kept) = sigma.get(k) {
        if kept < CERTIFIED_GAP * threshold {
            return Err(PolyError::IllConditioned { degree: k, gap: kept / threshold });
        }
    }
    if k == 0 {
        return Ok(vec![1.0]);
    }
    let neg_q: Vec<f64> = q.iter().map(|x| -x).collect();
    let cof = shifted_columns(&p, m - k + 1, &neg_q, n - k + 1);
    let svd = cof.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let (imin, _) = svd.singular_values.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("nonempty");
    let null = v_t.row(imin);
    let u: Vec<f64> = (0..=n - k).map(|i| null[m - k + 1 + i]).collect();
    let conv = shifted_columns(&u, k + 1, &[], 0);
    let rhs = DVector::from_column_slice(&p);
    let g = conv.svd(true, true).solve(&rhs, 1e-14).expect("solvable least squares");
    let lead = g[k];
    Ok(g.iter().map(|x| x / lead).collect())
}

/// The product of the distinct irreducible factors, made monic.
pub fn squarefree_part(p: &QPoly) -> Result<QPoly, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroInput("squarefree part"));
    }
    if p.degree() == Some(0) {
        return Ok(QPoly::one());
    }
    match p.exact_coeffs() {
        Some(a) => {
            let g = dense::gcd(&a, &dense::derivative(&a));
            Ok(QPoly::from_rationals(dense::monic(&dense::div_exact(&a, &g))))
        }
        None => {
            let g = gcd(p, &p.derivative())?;
            Ok(float_quotient(&p.f64_coeffs(), &g.f64_coeffs()).monic())
        }
    }
}

/// Least-squares quotient `a / b` for float polynomials.
fn float_quotient(a: &[f64], b: &[f64]) -> QPoly {
    if b.len() > a.len() {
        return QPoly::from_f64(vec![1.0]);
    }
    let k = a.len() - b.len() + 1;
    let conv = shifted_columns(b, k, &[], 0);
    let rhs = DVector::from_column_slice(a);
    let q = conv.svd(true, true).solve(&rhs, 1e-14).expect("solvable least squares");
    QPoly::from_f64(q.iter().copied().collect())
}

/// Squarefree decomposition `p = c·∏ fᵢ^i` of an exact polynomial, as
/// `(fᵢ, i)` pairs with monic nonconstant `fᵢ`; `None` for float input.
pub fn squarefree_decomposition(p: &QPoly) -> Option<Vec<(QPoly, usize)>> {
    let a = p.exact_coeffs()?;
    Some(dense::squarefree_decomposition(&a).into_iter().map(|(f, i)| (QPoly::from_rationals(f), i)).collect())
}

/// The radical of the ideal generated by `qs` in one variable: the monic
/// squarefree part of their gcd. Its roots are the common roots of all inputs.
pub fn radical_at_point(qs: &[QPoly]) -> Result<QPoly, PolyError> {
    radical_at_point_with(qs, Tolerance::default())
}

pub fn radical_at_point_with(qs: &[QPoly], tol: Tolerance) -> Result<QPoly, PolyError> {
    if qs.iter().any(|q| !q.is_exact()) {
        return float_radical(qs, tol);
    }
    let mut nonzero = qs.iter().filter(|q| !q.is_zero());
    let mut g = nonzero.next().ok_or(PolyError::AllZero)?.monic();
    for q in nonzero {
        if g.degree() == Some(0) {
            break;
        }
        g = gcd_with(&g, q, tol)?;
    }
    squarefree_part(&g)
}

/// Eigenvalues closer than this (relative to `max(1, |z|)`) are one root.
pub const CLUSTER_RADIUS: f64 = 1e-4;

/// `|q(z)| / Σ|q_k||z|^k`.
fn relative_residual(c: &[f64], z: Complex64) -> f64 {
    let (value, _) = crate::roots::horner(c, z);
    let scale: f64 = c.iter().rev().fold(0.0, |acc, a| acc * z.norm() + a.abs());
    if scale == 0.0 {
        0.0
    } else {
        value.norm() / scale
    }
}

fn clusters(zs: Vec<Complex64>) -> Vec<Complex64> {
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    for z in zs {
        let near = groups.iter_mut().find(|g| (g[0] - z).norm() <= CLUSTER_RADIUS * z.norm().max(1.0));
        match near {
            Some(g) => g.push(z),
            None => groups.push(vec![z]),
        }
    }
    groups.into_iter().map(|g| g.iter().sum::<Complex64>() / g.len() as f64).collect()
}

fn float_radical(qs: &[QPoly], tol: Tolerance) -> Result<QPoly, PolyError> {
    let polys: Vec<Vec<f64>> = qs.iter().filter(|q| !q.is_zero()).map(|q| q.monic().f64_coeffs()).collect();
    let pivot = (0..polys.len()).min_by_key(|&k| polys[k].len()).ok_or(PolyError::AllZero)?;
    if polys[pivot].len() == 1 {
        return Ok(QPoly::from_f64(vec![1.0]));
    }
    let mut common = Vec::new();
    for z in clusters(crate::roots::polished_roots(&polys[pivot])?) {
        let worst = polys.iter().map(|c| relative_residual(c, z)).fold(0.0, f64::max);
        if worst <= tol.rel {
            common.push(z);
        } else if worst < CERTIFIED_GAP * tol.rel {
            return Err(PolyError::AmbiguousRoot { root: format!("{z}"), residual: worst });
        }
    }
    let mut prod = vec![Complex64::new(1.0, 0.0)];
    for z in &common {
        let mut next = vec![Complex64::new(0.0, 0.0); prod.len() + 1];
        for (k, c) in prod.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * z;
        }
        prod = next;
    }
    Ok(QPoly::from_f64(prod.into_iter().map(|c| c.re).collect()))
}
