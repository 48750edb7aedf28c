//! Rewrite rules, derivations and normal forms against independent oracles.

use jetalg::raw::{random_raw, Strategy};
use jetalg::{eliminate_s21, eliminate_squares, free_derive, p2_residuals, parse_jet, JetPoly, JetRing, Weight, Word};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn p(src: &str) -> JetPoly {
    parse_jet(src).unwrap()
}

#[test]
fn commutation_of_first_derivatives() {
    let ring = JetRing::p2();
    assert_eq!(ring.normalize(&(p("s12") - p("s21"))), p("R*s"));
    assert_eq!(ring.derive(&JetPoly::s2(), 1), p("s21 + R*s"));
}

#[test]
fn second_order_rules() {
    let ring = JetRing::p2();
    assert_eq!(ring.normalize(&p("s22")), p("2*s21 - s*s2 + 2*s*s1 + R*s + R2"));
    assert_eq!(ring.normalize(&p("s11")), p("2*s21 - 2*s*s2 + s*s1 + R*s + R1"));
    assert!(ring.normalize(&JetPoly::zero()).is_zero());
}

#[test]
fn simple_derivations() {
    let ring = JetRing::free();
    assert_eq!(ring.derive(&JetPoly::s(), 1), JetPoly::s1());
    assert_eq!(ring.derive(&p("1/R"), 2), p("-R2/R^2"));
}

/// Reductions of the third-order jets, frozen from an independent computer
/// algebra solution of the differentiated second-order system.
#[test]
fn third_order_rules_match_frozen_solution() {
    let ring = JetRing::p2();
    let expected = [
        (
            "s111",
            "4/3*R^2 - R*s^2 - 5/3*R*s1 + 10/3*R*s2 - 2*R1*s + R11 - 2*R12 + 2*R2*s + s^2*s1 + 2*s^2*s2 \
             - 2*s*s21 - 5/3*s1^2 - 4/3*s1*s2 + 4/3*s2^2",
        ),
        (
            "s211",
            "2/3*R^2 - 10/3*R*s1 + 5/3*R*s2 - 2*R1*s - R12 + R2*s + 2*s^2*s2 - s*s21 - 4/3*s1^2 \
             + 1/3*s1*s2 + 2/3*s2^2",
        ),
        (
            "s221",
            "4/3*R^2 + R*s^2 - 5/3*R*s1 + 1/3*R*s2 - R1*s - R12 + R2*s + 2*s^2*s1 + s*s21 - 2/3*s1^2 \
             - 1/3*s1*s2 + 4/3*s2^2",
        ),
        (
            "s222",
            "8/3*R^2 + R*s^2 - 10/3*R*s1 + 5/3*R*s2 - 2*R1*s - 2*R12 + 2*R2*s + R22 + 2*s^2*s1 + s^2*s2 \
             + 2*s*s21 - 4/3*s1^2 + 4/3*s1*s2 + 5/3*s2^2",
        ),
    ];
    for (word, rhs) in expected {
        assert_eq!(ring.normalize(&p(word)), p(rhs), "{word}");
    }
    assert_eq!(ring.derive(&JetPoly::s21(), 1), ring.normalize(&(p("s211") + p("2*R*s1"))));
}

/// The printed third-order system, compared after normalization. Two entries
/// carry single-monomial misprints in the `R*s1` coefficient.
#[test]
fn printed_third_order_system() {
    let ring = JetRing::p2();
    let printed = [
        (
            "212",
            "s*s21 - 1/3*s1*s2 + 4/3*s2^2 - 2/3*s1^2 + 4/3*R*s2 + 2*s^2*s1 + R*s^2 + (2*R2 - R1)*s \
             - 2/3*R21 - 1/3*R12",
            "-5/3*R*s1",
        ),
        (
            "211",
            "-s*s21 + 1/3*s1*s2 + 2/3*s2^2 - 4/3*s1^2 + (5/3*R + 2*s^2)*s2 - 10*R*s1 + (R2 - 2*R1)*s \
             - 1/3*R21 - 2/3*R12",
            "20/3*R*s1",
        ),
        (
            "111",
            "-2*s*s21 - 4/3*s1*s2 + 4/3*s2^2 - 5/3*s1^2 + (10/3*R + 2*s^2)*s2 - (5/3*R - s^2)*s1 - R*s^2 \
             + (2*R2 - 2*R1)*s - 2/3*R21 - 4/3*R12 + R11",
            "0",
        ),
        (
            "222",
            "2*s*s21 + 4/3*s1*s2 + 5/3*s2^2 - 4/3*s1^2 + (5/3*R + s^2)*s2 - (10/3*R - 2*s^2)*s1 + R*s^2 \
             + (2*R2 - 2*R1)*s - 4/3*R21 - 2/3*R12 + R22",
            "0",
        ),
    ];
    for (word, rhs, misprint) in printed {
        let derived = ring.word(word.parse::<Word>().unwrap());
        assert_eq!(derived - ring.normalize(&p(rhs)), p(misprint), "s{word}");
    }
}

#[test]
fn third_order_reductions_are_path_independent() {
    let ring = JetRing::p2();
    for w in Word::all_of_len(3) {
        let (first, rest) = w.split_first().unwrap();
        let peeled = ring.derive(&ring.word(rest), first);
        assert_eq!(peeled, ring.word(w), "s{w}");
    }
}

#[test]
fn eliminations() {
    let phi = p("-24*R*s21 + 3*R*s^3 + R1*s1");
    let e = eliminate_s21(&JetPoly::s21(), &phi).unwrap();
    assert_eq!(e, p("(3*R*s^3 + R1*s1)/(24*R)"));
    assert_eq!(eliminate_s21(&JetPoly::s(), &phi).unwrap(), JetPoly::s());
    assert!(eliminate_s21(&phi, &phi).unwrap().is_zero());

    let psi1 = p("24*R*s2^2 - 48*R*s1*s2 + R1*s1 + s^2*s2 + R2*s");
    let psi2 = p("-24*R*s1^2 + 48*R*s1*s2 + R2*s2 + R*s");
    assert!(eliminate_squares(&psi1, &psi1, &psi2).unwrap().is_zero());
    assert_eq!(eliminate_squares(&JetPoly::s1(), &psi1, &psi2).unwrap(), JetPoly::s1());
    let lhs = p("24*R*s2^2");
    assert_eq!(eliminate_squares(&lhs, &psi1, &psi2).unwrap(), p("48*R*s1*s2 - R1*s1 - s^2*s2 - R2*s"));
    let cubic = p("s1^2*s2");
    assert!(eliminate_squares(&cubic, &psi1, &psi2).is_err());
}

#[test]
fn weights() {
    assert_eq!(p("-24*R*s21 + 3*R*s^3 + R122").weight(), Weight::Homogeneous(5));
    assert_eq!(p("24*R*s2^2").weight(), Weight::Homogeneous(6));
    assert!(matches!(p("s + R").weight(), Weight::Inhomogeneous(ref v) if v.len() == 2));
}

#[test]
fn mirror_exchanges_the_second_order_residuals() {
    let ring = JetRing::free();
    let (p21, p22) = p2_residuals();
    assert_eq!(ring.mirror(&p21), -p22.clone());
    assert_eq!(ring.mirror(&p22), -p21);
    let e = p("R12*s221 - 3/R*s1^2*s2 + R2*s21");
    assert_eq!(ring.mirror(&ring.mirror(&e)), e);
    assert_eq!(ring.mirror(&free_derive(&e, 1)), free_derive(&ring.mirror(&e), 2));
}

#[test]
fn swap_orders_agree_with_derivation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..200u64 {
        let raw = random_raw(&mut rng, 3, 4);
        let reference = raw.to_jet_by_derivation();
        for strategy in [Strategy::Leftmost, Strategy::Rightmost, Strategy::Random(case)] {
            assert_eq!(raw.to_jet_by_swaps(strategy), reference, "case {case}, {strategy:?}");
        }
    }
}

#[test]
fn p2_commutator_on_first_order_polynomials() {
    let ring = JetRing::p2();
    for (src, weight) in [("s", 1), ("s1", 2), ("s2", 2), ("s*s1 + R*s", 3), ("R1*s2 - s^3*R", 5)] {
        let e = p(src);
        let c = ring.derive(&ring.derive(&e, 2), 1) - ring.derive(&ring.derive(&e, 1), 2);
        assert_eq!(c, e.scale(&jetalg::RAlg::r()).times_int(weight), "{src}");
    }
}
