use num_rational::BigRational;
use polyalg::{
    gcd, radical_at_point, radical_at_point_with, resultant, roots, squarefree_decomposition, PolyError, QPoly, Root,
    RootValue, Tolerance,
};
use symexpr::NumValue;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn p(c: &[i64]) -> QPoly {
    QPoly::from_ints(c)
}

fn rational_root(n: i64, d: i64, m: usize) -> Root {
    Root { value: RootValue::Rational(q(n, d)), multiplicity: m }
}

#[test]
fn normalization() {
    let a = QPoly::from_rationals(vec![q(1, 2), q(-3, 4), q(0, 1)]);
    assert_eq!(a.degree(), Some(1));
    assert_eq!(a.content(), &NumValue::ratio(1, 4));
    assert_eq!(a.normalized_coeffs(), &[NumValue::int(2), NumValue::int(-3)]);
    assert_eq!(a.coeffs(), vec![NumValue::ratio(1, 2), NumValue::ratio(-3, 4)]);
    assert_eq!(a.to_string(), "-3/4*s + 1/2");
    assert_eq!(p(&[1, 1]).to_string(), "s + 1");
    assert!(QPoly::new(vec![NumValue::int(0)]).is_zero());
}

#[test]
fn gcd_examples() {
    let a = p(&[2, 3, 1]);
    let b = p(&[3, 4, 1]);
    assert_eq!(gcd(&a, &b).unwrap(), p(&[1, 1]));
    assert_eq!(gcd(&p(&[4, 2]), &QPoly::zero()).unwrap(), p(&[2, 1]));
    assert_eq!(gcd(&p(&[1, 0, 1]), &p(&[-1, 1])).unwrap(), QPoly::one());
    assert_eq!(gcd(&QPoly::zero(), &QPoly::zero()), Err(PolyError::ZeroInput("gcd")));
    let high = QPoly::from_roots(&[q(1, 3), q(-2, 1), q(5, 7), q(5, 7)]);
    let other = QPoly::from_roots(&[q(5, 7), q(1, 3), q(9, 1)]);
    assert_eq!(gcd(&high, &other).unwrap(), QPoly::from_roots(&[q(1, 3), q(5, 7)]).monic());
}

#[test]
fn radical_examples() {
    let r = radical_at_point(&[p(&[0, 0, 1]), p(&[0, 0, 0, 1])]).unwrap();
    assert_eq!(r, p(&[0, 1]));
    let r = radical_at_point(&[p(&[1, 1]), p(&[2, 1])]).unwrap();
    assert_eq!(r.degree(), Some(0));
    assert_eq!(radical_at_point(&[QPoly::zero()]), Err(PolyError::AllZero));
    let r = radical_at_point(&[QPoly::zero(), p(&[1, 2, 1]), p(&[-1, 0, 1])]).unwrap();
    assert_eq!(r, p(&[1, 1]));
}

#[test]
fn resultant_examples() {
    let (a, b) = (q(3, 2), q(-7, 5));
    let r =
        resultant(&QPoly::from_roots(std::slice::from_ref(&a)), &QPoly::from_roots(std::slice::from_ref(&b))).unwrap();
    assert_eq!(r, NumValue::Exact(a - b));
    let f = p(&[1, -2, 0, 5]);
    assert!(resultant(&f, &f).unwrap().is_zero());
    assert_eq!(resultant(&p(&[3]), &p(&[1, 0, 1])).unwrap(), NumValue::int(9));
    assert_eq!(resultant(&p(&[-2, 0, 1]), &p(&[-3, 0, 1])).unwrap(), NumValue::int(1));
    assert!(resultant(&QPoly::zero(), &f).is_err());
}

#[test]
fn squarefree_examples() {
    let f = QPoly::from_roots(&[q(1, 1), q(1, 1), q(1, 1), q(-2, 1), q(0, 1), q(0, 1)]);
    let sqf = squarefree_decomposition(&f).unwrap();
    assert_eq!(sqf, vec![(p(&[2, 1]), 1), (p(&[0, 1]), 2), (p(&[-1, 1]), 3)]);
}

#[test]
fn root_examples() {
    assert_eq!(roots(&p(&[1, 1])).unwrap(), vec![rational_root(-1, 1, 1)]);
    assert_eq!(roots(&p(&[-1, 0, 1])).unwrap(), vec![rational_root(-1, 1, 1), rational_root(1, 1, 1)]);
    assert_eq!(roots(&p(&[0, 0, 0, 1])).unwrap(), vec![rational_root(0, 1, 3)]);
    assert_eq!(roots(&p(&[3])), Err(PolyError::Constant("roots")));
    let irr = roots(&p(&[-2, 0, 1])).unwrap();
    assert_eq!(irr.len(), 2);
    for (r, expected) in irr.iter().zip([-std::f64::consts::SQRT_2, std::f64::consts::SQRT_2]) {
        match r.value {
            RootValue::Real(x) => assert!((x - expected).abs() < 1e-12),
            ref other => panic!("expected a real root, got {other:?}"),
        }
    }
    let mixed = roots(&p(&[3, -2, 3, -2, 0, 0])).unwrap();
    assert_eq!(mixed[0], rational_root(3, 2, 1));
    assert!(mixed[1..].iter().all(|r| matches!(r.value, RootValue::Complex(z) if (z.norm() - 1.0).abs() < 1e-12)));
}

#[test]
fn float_fallback() {
    let f = QPoly::from_f64(vec![2.0, 3.0, 1.0]);
    let g = QPoly::from_f64(vec![3.0, 4.0, 1.0]);
    let d = gcd(&f, &g).unwrap();
    assert!(!d.is_exact());
    let c = d.f64_coeffs();
    assert_eq!(c.len(), 2);
    assert!((c[0] - 1.0).abs() < 1e-9 && (c[1] - 1.0).abs() < 1e-9);
    let coprime = gcd(&f, &QPoly::from_f64(vec![-5.0, 1.0])).unwrap();
    assert_eq!(coprime.degree(), Some(0));
    let doubled = QPoly::from_f64(vec![1.0, 2.0, 1.0]).mul(&QPoly::from_f64(vec![-3.0, 1.0]));
    let rs = roots(&doubled).unwrap();
    assert_eq!(rs.len(), 2);
    assert!(rs.iter().any(|r| r.multiplicity == 2 && (r.value.to_complex().re + 1.0).abs() < 1e-9));
    let res = resultant(&f, &QPoly::from_f64(vec![1.0, 1.0])).unwrap();
    assert!(res.to_f64().abs() < 1e-12);
    let ill = gcd(&QPoly::from_f64(vec![1.0, 1.0]), &QPoly::from_f64(vec![1.0 + 1e-8, 1.0]));
    assert!(matches!(ill, Err(PolyError::IllConditioned { .. })));
}

fn perturbed(roots: &[f64], noise: f64) -> QPoly {
    let mut c = vec![1.0];
    for r in roots {
        let mut next = vec![0.0; c.len() + 1];
        for (k, a) in c.iter().enumerate() {
            next[k] -= r * a;
            next[k + 1] += a;
        }
        c = next;
    }
    QPoly::from_f64(c.iter().enumerate().map(|(k, a)| a * (1.0 + noise * (k as f64 - 1.5))).collect())
}

#[test]
fn float_radical_matches_roots() {
    let tol = Tolerance::default();
    let qs = [perturbed(&[-1.0, 2.0], 1e-14), perturbed(&[-1.0, 0.5, 3.0], -1e-14), perturbed(&[-1.0, -4.0], 2e-14)];
    let r = radical_at_point_with(&qs, tol).unwrap();
    let c = r.f64_coeffs();
    assert_eq!(r.degree(), Some(1));
    assert!((c[0] - c[1]).abs() < 1e-9 * c[1].abs());

    let two = [perturbed(&[-1.0, 2.0, 5.0], 0.0), perturbed(&[2.0, -1.0], 1e-15), perturbed(&[2.0, -1.0, -1.0], 0.0)];
    assert_eq!(radical_at_point_with(&two, tol).unwrap().degree(), Some(2));

    let none = [perturbed(&[-1.0, 2.0], 0.0), perturbed(&[1.0, 3.0], 0.0)];
    assert_eq!(radical_at_point_with(&none, tol).unwrap().degree(), Some(0));

    let near = [perturbed(&[-1.0, 2.0], 0.0), perturbed(&[-1.0 + 1e-8, 3.0], 0.0)];
    assert!(matches!(radical_at_point_with(&near, tol), Err(PolyError::AmbiguousRoot { .. })));
}
