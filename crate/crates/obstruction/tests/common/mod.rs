#![allow(dead_code)]

use std::sync::OnceLock;

use jetalg::{RValues, RWord};
use num_rational::BigRational;
use obstruction::{ObstructionTower, TowerEvaluator};
use rand::Rng;
use symexpr::NumValue;

pub const EXAMPLE_1: &str = "(x+y)*exp(-x)";
pub const EXAMPLE_2: &str = "log(x) + (1/2)*log((x^2+y^2)/x^2) + arctan(y/x)";

pub fn tower() -> &'static ObstructionTower {
    static T: OnceLock<ObstructionTower> = OnceLock::new();
    T.get_or_init(|| ObstructionTower::derive().expect("tower derives"))
}

pub fn evaluator() -> &'static TowerEvaluator {
    static E: OnceLock<TowerEvaluator> = OnceLock::new();
    E.get_or_init(|| TowerEvaluator::new(tower()).expect("evaluator"))
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn small_rational(rng: &mut impl Rng) -> NumValue {
    NumValue::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5))
}

/// A random exact binding of the curvature words up to order 6, with `ℛ ≠ 0`.
pub fn random_binding(rng: &mut impl Rng) -> RValues {
    let mut r = small_rational(rng);
    while r.is_zero() {
        r = small_rational(rng);
    }
    let mut v = RValues::new(r);
    for w in RWord::all(6) {
        if w.order() > 0 {
            v.set(w, small_rational(rng));
        }
    }
    v
}
