mod common;

use common::tower;
use num_rational::BigRational;
use obstruction::{rational_content, NumPoly, SPoly};
use proptest::prelude::*;
use symexpr::NumValue;

fn poly() -> impl Strategy<Value = NumPoly> {
    prop::collection::vec((-20i64..=20, 1i64..=6), 0..8)
        .prop_map(|c| SPoly::new(c.into_iter().map(|(n, d)| NumValue::ratio(n, d)).collect()))
}

fn value() -> impl Strategy<Value = NumValue> {
    (-12i64..=12, 1i64..=7).prop_map(|(n, d)| NumValue::ratio(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn evaluation_is_a_ring_map(p in poly(), q in poly(), s in value()) {
        prop_assert_eq!(p.mul(&q).eval(&s), &p.eval(&s) * &q.eval(&s));
        prop_assert_eq!(p.add(&q).eval(&s), &p.eval(&s) + &q.eval(&s));
        prop_assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn derivative_obeys_leibniz(p in poly(), q in poly()) {
        prop_assert_eq!(p.mul(&q).ds(), p.ds().mul(&q).add(&p.mul(&q.ds())));
    }

    #[test]
    fn primitive_part_has_unit_content(p in poly()) {
        prop_assume!(!p.is_zero());
        let prim = p.primitive().exact_coeffs().unwrap();
        prop_assert_eq!(rational_content(&prim), BigRational::from_integer(1.into()));
        prop_assert_eq!(p.primitive().degree(), p.degree());
    }

    #[test]
    fn mirror_is_an_involution(k in 0usize..4, part in 0usize..4) {
        let p = tower().rows[k].parts()[part].clone();
        prop_assert_eq!(p.mirror().mirror(), p);
    }
}
