use jetalg::{free_derive, parse_jet, JetMono, JetPoly, JetVar, RAlg, RMono, RWord, Weight};
use proptest::prelude::*;

fn rmono() -> impl Strategy<Value = (RMono, i64)> {
    (-2i32..=2, proptest::collection::vec((0usize..3, 0usize..3), 0..3), -6i64..=6).prop_map(|(k, words, q)| {
        let mut m = RMono::r_pow(k);
        for (a, b) in words {
            if a + b > 0 {
                m = m.mul(&RMono::rword(RWord::new(a, b)));
            }
        }
        (m, q)
    })
}

fn jetpoly() -> impl Strategy<Value = JetPoly> {
    proptest::collection::vec((rmono(), proptest::collection::vec((0usize..3, 0usize..3), 0..3)), 1..5).prop_map(
        |terms| {
            let mut out = JetPoly::zero();
            for ((rm, q), vars) in terms {
                let mut jm = JetMono::ONE;
                for (b, a) in vars {
                    jm = jm.times(JetVar::new(b, a), 1);
                }
                out.add_term(jm, RAlg::term(rm, jetalg::qi(q)));
            }
            out
        },
    )
}

/// Splits a polynomial into weight-homogeneous parts.
fn homogeneous_parts(e: &JetPoly) -> Vec<(i32, JetPoly)> {
    let mut parts: std::collections::BTreeMap<i32, JetPoly> = Default::default();
    for (m, a) in e.terms() {
        for (rm, q) in a.terms() {
            parts.entry(m.weight() + rm.weight()).or_default().add_term(*m, RAlg::term(*rm, q.clone()));
        }
    }
    parts.into_iter().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn text_round_trip(e in jetpoly()) {
        let printed = e.to_string();
        prop_assert_eq!(parse_jet(&printed).unwrap(), e);
    }

    #[test]
    fn derivation_commutator(e in jetpoly()) {
        for (w, part) in homogeneous_parts(&e) {
            let c = free_derive(&free_derive(&part, 2), 1) - free_derive(&free_derive(&part, 1), 2);
            let expected = part.scale(&RAlg::r()).times_int(w as i64);
            prop_assert_eq!(c, expected);
        }
    }

    #[test]
    fn derivations_preserve_homogeneity(e in jetpoly()) {
        for (w, part) in homogeneous_parts(&e) {
            for i in [1u8, 2] {
                match free_derive(&part, i).weight() {
                    Weight::Homogeneous(v) => prop_assert_eq!(v, w + 1),
                    Weight::Zero => {}
                    other => prop_assert!(false, "{:?}", other),
                }
            }
        }
    }
}
