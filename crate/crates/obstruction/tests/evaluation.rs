mod common;

use std::sync::OnceLock;

use common::{evaluator, q, random_binding, tower, EXAMPLE_1, EXAMPLE_2};
use jetalg::{RValues, RWord};
use obstruction::{q1_q2, NumPoly, SymPoly, TowerError, Q_DEGREE_BOUNDS};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symexpr::{EvalMode, NumValue};
use webgeom::{ladder, Gauge, Point, WebChart};

fn symbolic_q2() -> &'static SymPoly {
    static Q2: OnceLock<SymPoly> = OnceLock::new();
    Q2.get_or_init(|| {
        let [_, q2] = tower().symbolic_q1_q2();
        q2
    })
}

fn evaluate(src: &str, gauge: Gauge, p: Point) -> obstruction::EvaluatedTower {
    let chart = WebChart::parse(src).unwrap();
    let l = ladder(&chart, gauge, 6).unwrap();
    evaluator().evaluate_at(&chart, &l, &p, EvalMode::Exact).unwrap().1
}

fn has_root(p: &NumPoly, s: i64) -> bool {
    p.eval(&NumValue::int(s)).is_zero()
}

#[test]
fn example_one_at_origin_is_exact() {
    for gauge in [Gauge::Gradient, Gauge::Unit] {
        let t = evaluate(EXAMPLE_1, gauge, Point::origin());
        assert!(t.is_exact());
        assert_eq!(t.curvature, NumValue::int(-1));
        assert_eq!(t.q_degrees(), Q_DEGREE_BOUNDS.map(Some));
        assert!(t.q.iter().all(|p| has_root(p, -1)));
        assert!(t.det4().is_zero());
    }
}

#[test]
fn example_one_off_origin_in_unit_gauge() {
    let t = evaluate(EXAMPLE_1, Gauge::Unit, Point::ratio(1, 20, 1, 30));
    assert!(t.is_exact());
    assert_eq!(t.curvature.as_exact(), Some(&q(-12, 11)));
    assert!(t.q.iter().all(|p| has_root(p, -1)));
}

#[test]
fn example_two_is_exact() {
    let t = evaluate(EXAMPLE_2, Gauge::Gradient, Point::ratio(1, 1, 0, 1));
    assert!(t.is_exact());
    assert_eq!(t.curvature, NumValue::int(2));
    assert!(t.q[1].degree().is_some() && t.q[5].degree().is_some());
    assert!(!has_root(&t.q[0], -1));
}

#[test]
fn zero_curvature_is_the_parallelizable_branch() {
    let mut v = RValues::new(NumValue::zero());
    for w in RWord::all(6) {
        v.set(w, NumValue::zero());
    }
    assert!(matches!(evaluator().evaluate(&v), Err(TowerError::Parallelizable)));
    let chart = WebChart::parse("x + y").unwrap();
    let l = ladder(&chart, Gauge::Gradient, 6).unwrap();
    let r = evaluator().evaluate_at(&chart, &l, &Point::origin(), EvalMode::Exact);
    assert!(matches!(r, Err(TowerError::Parallelizable)));
}

#[test]
fn degrees_at_random_bindings() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut attained = 0;
    for _ in 0..10 {
        let t = evaluator().evaluate(&random_binding(&mut rng)).unwrap();
        let degrees = t.q_degrees();
        for (d, bound) in degrees.iter().zip(Q_DEGREE_BOUNDS) {
            assert!(d.is_some_and(|d| d <= bound), "{degrees:?}");
        }
        if degrees == Q_DEGREE_BOUNDS.map(Some) {
            attained += 1;
        }
        assert!(t.det4().is_zero());
    }
    assert!(attained >= 8, "generic degrees attained at {attained} of 10 bindings");
}

#[test]
fn vanishing_first_derivatives_lower_determinant_degrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut v = random_binding(&mut rng);
    v.set(RWord::new(1, 0), NumValue::int(1));
    v.set(RWord::new(0, 1), NumValue::int(1));
    assert_eq!(evaluator().evaluate(&v).unwrap().det_degrees(), obstruction::DET_DEGREES.map(Some));
    v.set(RWord::new(0, 1), NumValue::zero());
    assert_eq!(evaluator().evaluate(&v).unwrap().det_degrees(), [Some(7), Some(8), Some(7), Some(11)]);
    v.set(RWord::new(0, 1), NumValue::int(1));
    v.set(RWord::new(1, 0), NumValue::zero());
    assert_eq!(evaluator().evaluate(&v).unwrap().det_degrees(), [Some(7), Some(7), Some(8), Some(11)]);
}

#[test]
fn q2_by_three_routes() {
    let q2 = symbolic_q2();
    assert_eq!(q2.degree(), Some(Q_DEGREE_BOUNDS[1]));
    let dets = tower().dets();
    let nabla = [1u8, 2].map(|i| [0, 1, 2].map(|k| dets[k].nabla(i)));
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let v = random_binding(&mut rng);
        let from_symbolic = q2.bind(&v).unwrap();
        let [d, a, b, c] = [0, 1, 2, 3].map(|k| dets[k].bind(&v).unwrap());
        let bound_nabla = nabla.clone().map(|row| row.map(|p| p.bind(&v).unwrap()));
        let [_, from_dets] = q1_q2(v.r(), &d, &a, &b, &c, &bound_nabla);
        let from_rows = evaluator().evaluate(&v).unwrap().system.q[1].clone();
        assert!(from_symbolic.is_exact());
        assert_eq!(from_symbolic, from_dets);
        assert_eq!(from_symbolic, from_rows);
    }
}
