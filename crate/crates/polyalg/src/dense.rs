//! Dense exact arithmetic on coefficient vectors, lowest degree first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) type RatVec = Vec<BigRational>;
pub(crate) type IntVec = Vec<BigInt>;

pub(crate) fn trim<T: Zero>(mut v: Vec<T>) -> Vec<T> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

pub(crate) fn degree<T>(v: &[T]) -> Option<usize> {
    v.len().checked_sub(1)
}

pub(crate) fn sub(a: &[BigRational], b: &[BigRational]) -> RatVec {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    trim((0..n).map(|k| a.get(k).unwrap_or(&z) - b.get(k).unwrap_or(&z)).collect())
}

pub(crate) fn mul(a: &[BigRational], b: &[BigRational]) -> RatVec {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub(crate) fn derivative(a: &[BigRational]) -> RatVec {
    trim(a.iter().enumerate().skip(1).map(|(k, c)| c * BigRational::from_integer(k.into())).collect())
}

/// Quotient and remainder; `b` must be nonzero.
pub(crate) fn divrem(a: &[BigRational], b: &[BigRational]) -> (RatVec, RatVec) {
    let db = degree(b).expect("division by zero polynomial");
    let lead = &b[db];
    let mut r = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), trim(r));
    }
    let mut quot = vec![BigRational::zero(); r.len() - db];
    for k in (0..quot.len()).rev() {
        let c = &r[k + db] / lead;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                r[k + j] -= &c * bj;
            }
        }
        quot[k] = c;
    }
    r.truncate(db);
    (trim(quot), trim(r))
}

pub(crate) fn eval(a: &[BigRational], s: &BigRational) -> BigRational {
    a.iter().rev().fold(BigRational::zero(), |acc, c| acc * s + c)
}

pub(crate) fn monic(a: &[BigRational]) -> RatVec {
    match a.last() {
        Some(lead) => a.iter().map(|c| c / lead).collect(),
        None => Vec::new(),
    }
}

/// Positive rational `c` with `a / c` integral and primitive.
pub(crate) fn content(a: &[BigRational]) -> BigRational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for c in a.iter().filter(|c| !c.is_zero()) {
        num = num.gcd(c.numer());
        den = den.lcm(c.denom());
    }
    if num.is_zero() {
        BigRational::one()
    } else {
        BigRational::new(num, den)
    }
}

pub(crate) fn to_primitive_ints(a: &[BigRational]) -> IntVec {
    let c = content(a);
    a.iter().map(|x| (x / &c).to_integer()).collect()
}

fn int_content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn int_primitive(a: &[BigInt]) -> IntVec {
    let g = int_content(a);
    if g.is_zero() {
        return a.to_vec();
    }
    let g = if a.last().is_some_and(Signed::is_negative) { -g } else { g };
    a.iter().map(|c| c / &g).collect()
}

/// `lc(b)^(deg a − deg b + 1)·a mod b` over the integers.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> IntVec {
    let db = b.len() - 1;
    let lead = &b[db];
    let mut r = a.to_vec();
    for k in (0..a.len() - db).rev() {
        let c = r[k + db].clone();
        for x in r.iter_mut() {
            *x *= lead;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &c * bj;
        }
    }
    r.truncate(db);
    trim(r)
}

/// Monic gcd over the rationals by the subresultant remainder sequence.
pub(crate) fn gcd(a: &[BigRational], b: &[BigRational]) -> RatVec {
    match (a.is_empty(), b.is_empty()) {
        (true, _) => return monic(b),
        (_, true) => return monic(a),
        _ => {}
    }
    let (mut p, mut q) = (to_primitive_ints(a), to_primitive_ints(b));
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let delta = (p.len() - q.len()) as u32;
        let r = pseudo_rem(&p, &q);
        if r.is_empty() {
            break;
        }
        if r.len() == 1 {
            return vec![BigRational::one()];
        }
        let divisor = &g * num_traits::pow(h.clone(), delta as usize);
        p = q;
        q = r.iter().map(|c| c / &divisor).collect();
        g = p.last().expect("nonzero").clone();
        h = if delta == 0 {
            h
        } else {
            num_traits::pow(g.clone(), delta as usize) / num_traits::pow(h, delta as usize - 1)
        };
    }
    let q = int_primitive(&q);
    monic(&q.into_iter().map(BigRational::from_integer).collect::<Vec<_>>())
}

/// Exact quotient; panics in debug builds if the division leaves a remainder.
pub(crate) fn div_exact(a: &[BigRational], b: &[BigRational]) -> RatVec {
    let (q, r) = divrem(a, b);
    debug_assert!(r.is_empty(), "inexact polynomial division");
    q
}

/// Yun's squarefree decomposition: `a = c·∏ fᵢ^i` with monic, squarefree,
/// pairwise coprime `fᵢ`. Returns `(fᵢ, i)` for nonconstant factors.
pub(crate) fn squarefree_decomposition(a: &[BigRational]) -> Vec<(RatVec, usize)> {
    let mut out = Vec::new();
    if degree(a).unwrap_or(0) == 0 {
        return out;
    }
    let da = derivative(a);
    let g = gcd(a, &da);
    let mut b = div_exact(a, &g);
    let mut d = sub(&div_exact(&da, &g), &derivative(&b));
    let mut i = 1;
    while degree(&b).unwrap_or(0) > 0 {
        let f = gcd(&b, &d);
        b = div_exact(&b, &f);
        let c = div_exact(&d, &f);
        d = sub(&c, &derivative(&b));
        if degree(&f).unwrap_or(0) > 0 {
            out.push((f, i));
        }
        i += 1;
    }
    out
}

/// Determinant by fraction-free Bareiss elimination.
pub(crate) fn det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    if n == 0 {
        return BigRational::one();
    }
    let mut sign = BigRational::one();
    let mut prev = BigRational::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigRational::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}
