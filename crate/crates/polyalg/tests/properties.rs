use num_rational::BigRational;
use num_traits::Zero;
use polyalg::{gcd, resultant, roots, QPoly, RootValue};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = BigRational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn root_set(max: usize) -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec(rational(), 0..=max)
}

fn divides(d: &QPoly, p: &QPoly) -> bool {
    p.div_rem(d).is_some_and(|(_, r)| r.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gcd_divides_with_coprime_cofactors(a in root_set(5), b in root_set(5), common in root_set(3)) {
        let p = QPoly::from_roots(&[a, common.clone()].concat());
        let q = QPoly::from_roots(&[b, common].concat());
        let g = gcd(&p, &q).unwrap();
        prop_assert!(divides(&g, &p) && divides(&g, &q));
        let (pc, _) = p.div_rem(&g).unwrap();
        let (qc, _) = q.div_rem(&g).unwrap();
        prop_assert_eq!(gcd(&pc, &qc).unwrap(), QPoly::one());
    }

    #[test]
    fn resultant_vanishes_iff_common_factor(a in root_set(5), b in root_set(5), scale in 1i64..5) {
        prop_assume!(!a.is_empty() && !b.is_empty());
        let p = QPoly::from_roots(&a).mul(&QPoly::from_ints(&[scale]));
        let q = QPoly::from_roots(&b);
        let shared = a.iter().any(|x| b.contains(x));
        prop_assert_eq!(resultant(&p, &q).unwrap().is_zero(), shared);
        prop_assert_eq!(gcd(&p, &q).unwrap().degree().unwrap() > 0, shared);
    }

    #[test]
    fn roots_of_products_of_linear_factors(rs in root_set(10)) {
        prop_assume!(!rs.is_empty());
        let found = roots(&QPoly::from_roots(&rs)).unwrap();
        let mut expanded: Vec<BigRational> = Vec::new();
        for r in found {
            match r.value {
                RootValue::Rational(x) => expanded.extend(std::iter::repeat_n(x, r.multiplicity)),
                other => prop_assert!(false, "non-rational root {}", other),
            }
        }
        let mut expected = rs.clone();
        expected.sort();
        expanded.sort();
        prop_assert_eq!(expanded, expected);
    }

    #[test]
    fn evaluation_of_from_roots(rs in root_set(6)) {
        let p = QPoly::from_roots(&rs);
        for r in &rs {
            prop_assert!(p.eval(&symexpr::NumValue::Exact(r.clone())).is_zero());
        }
        prop_assert!(!p.exact_coeffs().unwrap().iter().all(BigRational::is_zero));
    }
}
