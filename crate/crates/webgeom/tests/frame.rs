use jetalg::{free_word, JetValues, JetVar, RAlg, Word};
use num_rational::BigRational;
use proptest::prelude::*;
use symexpr::{eval, eval_f64, EvalMode, Expr, NumValue, Tape};
use webgeom::{
    curvature, evaluate_ladder, frame_derive, ladder, CurvLadder, FrameField, Gauge, Point, WebChart, Words,
};

const EXAMPLE_1: &str = "(x+y)*exp(-x)";
const EXAMPLE_2: &str = "log(x) + (1/2)*log((x^2+y^2)/x^2) + arctan(y/x)";

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn exact(v: &NumValue) -> BigRational {
    v.as_exact().cloned().unwrap_or_else(|| panic!("expected an exact value, got {v:?}"))
}

#[test]
fn curvature_anchors_are_exact() {
    let cases = [(EXAMPLE_1, Point::origin(), -1), (EXAMPLE_2, Point::ratio(1, 1, 0, 1), 2)];
    for (src, p, expected) in cases {
        let chart = WebChart::parse(src).unwrap();
        let r = eval(&curvature(&chart), &p.x, &p.y, EvalMode::Exact).unwrap();
        assert_eq!(exact(&r), q(expected, 1), "{src}");
        for gauge in [Gauge::Gradient, Gauge::Unit] {
            let l = ladder(&chart, gauge, 0).unwrap();
            let v = evaluate_ladder(&chart, &l, &p, EvalMode::Exact).unwrap();
            assert_eq!(exact(v.curvature()), q(expected, 1));
        }
    }
}

#[test]
fn parallel_web_is_flat() {
    let chart = WebChart::parse("x+y").unwrap();
    assert!(curvature(&chart).is_zero() || eval_f64(&curvature(&chart), 0.3, -0.2).unwrap() == 0.0);
    let l = ladder(&chart, Gauge::Gradient, 3).unwrap();
    for p in [Point::origin(), Point::ratio(1, 3, -2, 7)] {
        let v = evaluate_ladder(&chart, &l, &p, EvalMode::Exact).unwrap();
        assert!(v.values.values().all(NumValue::is_zero));
        assert!(v.is_exact());
    }
}

/// Ladder values frozen from an independent computer-algebra evaluation.
#[test]
fn ladder_regression_values() {
    let cases: [(&str, Point, [i64; 10]); 2] = [
        (EXAMPLE_1, Point::origin(), [-1, -3, -1, -15, -4, -1, -105, -24, -5, -1]),
        (EXAMPLE_2, Point::ratio(1, 1, 0, 1), [2, -4, -4, 12, 12, 28, -48, -48, -112, -248]),
    ];
    let words = ["", "1", "2", "11", "12", "22", "111", "112", "122", "222"];
    for (src, p, expected) in cases {
        let chart = WebChart::parse(src).unwrap();
        for gauge in [Gauge::Gradient, Gauge::Unit] {
            let l = ladder(&chart, gauge.clone(), 3).unwrap();
            let v = evaluate_ladder(&chart, &l, &p, EvalMode::Exact).unwrap();
            for (w, e) in words.iter().zip(expected) {
                let w: Word = w.parse().unwrap();
                assert_eq!(exact(v.get(w).unwrap()), q(e, 1), "{src} {} R{w}", gauge.name());
            }
        }
    }
    let chart = WebChart::parse(EXAMPLE_1).unwrap();
    let l = ladder(&chart, Gauge::Unit, 2).unwrap();
    let v = evaluate_ladder(&chart, &l, &Point::ratio(1, 20, 1, 30), EvalMode::Exact).unwrap();
    let expected =
        [("", q(-12, 11)), ("1", q(-432, 121)), ("2", q(-12, 11)), ("11", q(-25920, 1331)), ("12", q(-576, 121))];
    for (w, e) in expected {
        assert_eq!(exact(v.get(w.parse().unwrap()).unwrap()), e, "R{w}");
    }
}

#[test]
fn ladder_depth_limits() {
    let chart = WebChart::parse(EXAMPLE_1).unwrap();
    assert_eq!(ladder(&chart, Gauge::Gradient, 0).unwrap().entries().count(), 1);
    assert!(ladder(&chart, Gauge::Gradient, 7).is_err());
}

#[test]
fn degenerate_points_are_rejected() {
    let chart = WebChart::parse("x^2 + y").unwrap();
    let l = ladder(&chart, Gauge::Gradient, 1).unwrap();
    assert!(evaluate_ladder(&chart, &l, &Point::origin(), EvalMode::Exact).is_err());
    assert!(evaluate_ladder(&chart, &l, &Point::ratio(1, 2, 0, 1), EvalMode::Exact).is_ok());
}

#[test]
fn frame_annihilates_df_along_the_transversal() {
    let chart = WebChart::parse(EXAMPLE_2).unwrap();
    let frame = FrameField::new(&chart, Gauge::Gradient);
    let defect = chart.fx() * frame.coeff(1) - chart.fy() * frame.coeff(2);
    assert!(symexpr::simplify(&defect).is_zero());
}

#[test]
fn bracket_identity() {
    let webs = ["x*y + x + y", "(x+2*y)/(1+x^2)", "x^3 + x*y + 2*y"];
    let points = [(1, 3, 1, 5), (-1, 4, 2, 7), (3, 2, 1, 9), (2, 5, -3, 11)];
    for src in webs {
        let chart = WebChart::parse(src).unwrap();
        for gauge in [Gauge::Gradient, Gauge::Unit, Gauge::parse("1 + x^2").unwrap()] {
            let frame = FrameField::new(&chart, gauge);
            let tape = Tape::compile(&frame.bracket_defect());
            for &(a, b, c, d) in &points {
                for v in tape.eval_exact(&q(a, b), &q(c, d)).unwrap() {
                    assert!(v.is_exact() && v.is_zero(), "{src}");
                }
            }
        }
    }
    let chart = WebChart::parse(EXAMPLE_1).unwrap();
    let frame = FrameField::new(&chart, Gauge::Gradient);
    let mu = -(chart.partial(1, 1) / &(chart.fx() * chart.fy()));
    assert!(frame.mu(1).ptr_eq(frame.mu(2)) || frame.mu(1) == frame.mu(2));
    assert_eq!(frame.mu(1).to_string(), mu.to_string());
    assert!(symexpr::simplify(&(frame.mu(1) - &mu)).is_zero());
}

#[test]
fn constant_scalars_of_weight_zero_are_flat() {
    let chart = WebChart::parse(EXAMPLE_1).unwrap();
    for i in [1, 2] {
        assert!(frame_derive(&chart, &Gauge::Gradient, &Expr::one(), 0, i).is_zero());
    }
}

/// `D₁ℛ` against a central difference along the integral curve of `e₁`.
#[test]
fn first_derivative_matches_finite_differences() {
    let chart = WebChart::parse(EXAMPLE_1).unwrap();
    let l = ladder(&chart, Gauge::Gradient, 1).unwrap();
    let r = l.curvature().clone();
    let frame = l.frame();
    for &(x, y) in &[(0.0, 0.0), (0.1, -0.05), (-0.2, 0.15)] {
        let h = 1e-5;
        let fx = eval_f64(chart.fx(), x, y).unwrap();
        let fy = eval_f64(chart.fy(), x, y).unwrap();
        let e1 = (eval_f64(&r, x + h, y).unwrap() - eval_f64(&r, x - h, y).unwrap()) / (2.0 * h) / fx;
        let e2 = (eval_f64(&r, x, y + h).unwrap() - eval_f64(&r, x, y - h).unwrap()) / (2.0 * h) / fy;
        let rv = eval_f64(&r, x, y).unwrap();
        let mu1 = eval_f64(frame.mu(1), x, y).unwrap();
        let mu2 = eval_f64(frame.mu(2), x, y).unwrap();
        let d1 = eval_f64(l.get("1".parse().unwrap()).unwrap(), x, y).unwrap();
        let d2 = eval_f64(l.get("2".parse().unwrap()).unwrap(), x, y).unwrap();
        assert!((d1 - (e1 - 2.0 * mu1 * rv)).abs() < 1e-6 * (1.0 + d1.abs()));
        assert!((d2 - (e2 - 2.0 * mu2 * rv)).abs() < 1e-6 * (1.0 + d2.abs()));
    }
    let exact = evaluate_ladder(&chart, &l, &Point::origin(), EvalMode::Exact).unwrap();
    assert_eq!(exact.get("1".parse().unwrap()).unwrap(), &NumValue::int(-3));
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn example_point(which: usize) -> impl Strategy<Value = (f64, f64)> {
    let centre = if which == 1 { (0.0, 0.0) } else { (1.0, 0.0) };
    (-0.3f64..0.3, -0.3f64..0.3).prop_map(move |(dx, dy)| (centre.0 + dx, centre.1 + dy))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn two_curvature_routes_agree(p in example_point(1), p2 in example_point(2)) {
        for (src, (x, y)) in [(EXAMPLE_1, p), (EXAMPLE_2, p2), ("x*y + x^3 + 2*y", (p.0 + 1.0, p.1 + 1.0))] {
            let chart = WebChart::parse(src).unwrap();
            let closed = eval_f64(&curvature(&chart), x, y).unwrap();
            let frame = eval_f64(&FrameField::new(&chart, Gauge::Gradient).curvature(), x, y).unwrap();
            prop_assert!(rel_close(closed, frame, 1e-9), "{} at ({}, {}): {} vs {}", src, x, y, closed, frame);
        }
    }

    /// Every written word of the ladder agrees with the canonical word reached by
    /// the commutation rule, in both gauges.
    #[test]
    fn permutation_rule_on_the_ladder(p in example_point(1)) {
        let chart = WebChart::parse(EXAMPLE_1).unwrap();
        for gauge in [Gauge::Gradient, Gauge::Unit] {
            let all = CurvLadder::build(&chart, gauge, 4, Words::All).unwrap();
            let v = all.compile(&chart).eval_f64(p.0, p.1).unwrap();
            let r = v.to_rvalues();
            for (w, value) in &v.values {
                let canonical = RAlg::word(*w).eval(&r).unwrap().to_f64();
                prop_assert!(rel_close(value.to_f64(), canonical, 1e-9), "R{}", w);
            }
        }
    }

    /// Derivatives of an arbitrary weight-one scalar follow the jet-variable
    /// commutation rules.
    #[test]
    fn permutation_rule_on_a_weight_one_scalar(p in example_point(1), a in -2i64..=2, b in 1i64..=3) {
        let chart = WebChart::parse(EXAMPLE_1).unwrap();
        let l = ladder(&chart, Gauge::Gradient, 3).unwrap();
        let frame = l.frame();
        let s = Expr::parse(&format!("{a}*x*y + sin({b}*x) + y^2")).unwrap();
        let mut raw = std::collections::BTreeMap::new();
        raw.insert(Word::EMPTY, s);
        for n in 1..=3 {
            for w in Word::all_of_len(n) {
                let (i, rest) = w.split_first().unwrap();
                let d = frame.derive(&raw[&rest], 1 + rest.len() as i64, i);
                raw.insert(w, d);
            }
        }
        let rv = l.compile(&chart).eval_f64(p.0, p.1).unwrap().to_rvalues();
        let mut jets = JetValues::new();
        for v in JetVar::all(3) {
            jets.set(v, NumValue::Float(eval_f64(&raw[&v.word()], p.0, p.1).unwrap()));
        }
        for (w, e) in &raw {
            let direct = eval_f64(e, p.0, p.1).unwrap();
            let canonical = free_word(*w).eval(&rv, &jets).unwrap().to_f64();
            prop_assert!(rel_close(direct, canonical, 1e-9), "s{}: {} vs {}", w, direct, canonical);
        }
    }
}
