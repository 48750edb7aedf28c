//! Resultants by the Sylvester determinant.

use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::Zero;
use symexpr::NumValue;

use crate::dense;
use crate::error::PolyError;
use crate::qpoly::QPoly;

/// `Res(p, q)`, exact when both inputs are exact.
///
/// With `p` of degree `n` and `q` of degree `m`, the Sylvester matrix holds
/// `m` shifted rows of `p` and `n` shifted rows of `q`, highest degree first,
/// so `Res(s − a, s − b) = a − b`.
pub fn resultant(p: &QPoly, q: &QPoly) -> Result<NumValue, PolyError> {
    if p.is_zero() || q.is_zero() {
        return Err(PolyError::ZeroInput("resultant"));
    }
    let (n, m) = (p.degree().unwrap_or(0), q.degree().unwrap_or(0));
    let size = n + m;
    if let (Some(a), Some(b)) = (p.exact_coeffs(), q.exact_coeffs()) {
        let mut rows = vec![vec![BigRational::zero(); size]; size];
        fill(&mut rows, &a, &b, m, n, |row, col, c| row[col] = c.clone());
        return Ok(NumValue::Exact(dense::det(rows)));
    }
    let (a, b) = (p.f64_coeffs(), q.f64_coeffs());
    let mut mat = vec![vec![0.0; size]; size];
    fill(&mut mat, &a, &b, m, n, |row, col, c| row[col] = *c);
    let mat = DMatrix::from_fn(size, size, |i, j| mat[i][j]);
    Ok(NumValue::Float(if size == 0 { 1.0 } else { mat.determinant() }))
}

fn fill<T, E>(rows: &mut [Vec<E>], a: &[T], b: &[T], m: usize, n: usize, set: impl Fn(&mut Vec<E>, usize, &T)) {
    for i in 0..m {
        for (k, c) in a.iter().rev().enumerate() {
            set(&mut rows[i], i + k, c);
        }
    }
    for i in 0..n {
        for (k, c) in b.iter().rev().enumerate() {
            set(&mut rows[m + i], i + k, c);
        }
    }
}
