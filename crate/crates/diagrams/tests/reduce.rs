use std::collections::HashMap;

use cfield::{c64, Complex64, FieldExponent};
use diagrams::json::{diagram_from_json, diagram_to_json, factor_from_json, factor_to_json};
use diagrams::{
    enumerate_reductions, numeric_eval, reduce, ClosedFormFactor, Diagram, DiagramError, Position, RuleKind,
};
use plane::QuadratureSpec;
use proptest::prelude::*;

fn ex(m: i32, re: f64, im: f64) -> FieldExponent {
    FieldExponent::from_mw(m, c64(re, im))
}

fn pt(re: f64, im: f64) -> Position {
    Position::Point(c64(re, im))
}

fn double_chain() -> Diagram {
    Diagram::new()
        .with_external("z1", pt(0.0, 0.0))
        .with_external("z2", pt(0.7, -0.4))
        .with_internal("w1")
        .with_internal("w2")
        .with_edge("w1", "z1", ex(1, 0.7, 0.1))
        .with_edge("w2", "w1", ex(0, 0.8, -0.2))
        .with_edge("w2", "z2", ex(-1, 0.75, 0.3))
}

#[test]
fn identity_reduction() {
    let d = Diagram::new()
        .with_external("o", pt(0.0, 0.0))
        .with_external("p", Position::Momentum("p".into()))
        .with_edge("o", "p", ex(0, 0.3, 0.0));
    let r = reduce(&d).unwrap();
    assert!(r.steps.is_empty());
    let want = ClosedFormFactor::one().times_momentum("p", ex(0, 0.3, 0.0));
    assert!(r.factor.approx_eq(&want, 1e-12));
}

#[test]
fn double_chain_is_confluent_and_matches_value() {
    let d = double_chain();
    let r = reduce(&d).unwrap();
    assert_eq!(r.steps.len(), 2);
    assert!(r.steps.iter().all(|s| s.rule == RuleKind::Chain));
    assert_eq!(r.steps[0].at, "w1");
    let all = enumerate_reductions(&d, 4, 100).unwrap();
    assert!(all.len() >= 2);
    assert!(all.iter().all(|x| x.same_as(&r, 1e-9)));

    // Reduced value against integrating out the first vertex only.
    let half = diagrams::apply_chain(&d.reverse_edge(2), "w2").unwrap();
    let spec = QuadratureSpec::default().with_tol(1e-7, 1e-5);
    let num = numeric_eval(&half, &HashMap::new(), &spec).unwrap().value;
    let closed = r.eval(&HashMap::new()).unwrap();
    assert!((num - closed).norm() < 1e-4 * closed.norm(), "{num} {closed}");
}

#[test]
fn star_then_star_paths_agree() {
    // w is a unique star on (z1, z2, u); after it is integrated u becomes a unique star.
    let (a, b) = (ex(1, 0.45, 0.2), ex(0, 0.45, -0.1));
    let g = ex(0, 2.0, 0.0) - a - b;
    let x = ex(0, 2.0, 0.0) - g;
    let d = Diagram::new()
        .with_external("z1", pt(0.0, 0.0))
        .with_external("z2", pt(1.0, 0.0))
        .with_external("z3", pt(0.2, 0.9))
        .with_internal("w")
        .with_internal("u")
        .with_edge("w", "z1", a)
        .with_edge("w", "z2", b)
        .with_edge("w", "u", g)
        .with_edge("u", "z3", x);
    let first = reduce(&d).unwrap();
    assert_eq!(first.steps.len(), 2);
    assert!(first.steps.iter().all(|s| s.rule == RuleKind::StarTriangle));
    let all = enumerate_reductions(&d, 4, 1000).unwrap();
    assert!(!all.is_empty());
    for r in &all {
        assert!(r.same_as(&first, 1e-9), "{:?}\n{:?}", r.factor, first.factor);
    }
}

#[test]
fn fourier_reduction_keeps_wave() {
    let d = Diagram::new()
        .with_external("z", pt(0.3, 0.2))
        .with_internal("w")
        .with_edge("z", "w", ex(1, 0.6, 0.0))
        .with_wave("w", "p");
    let r = reduce(&d).unwrap();
    assert_eq!(r.waves.len(), 1);
    assert_eq!(r.waves[0].vertex, "z");
    let b: HashMap<String, Complex64> = [("p".to_string(), c64(0.9, 0.4))].into();
    let spec = QuadratureSpec::default().with_tol(1e-8, 1e-6);
    let num = numeric_eval(&d, &b, &spec).unwrap().value;
    let closed = r.eval(&b).unwrap();
    assert!((num - closed).norm() < 1e-5 * closed.norm(), "{num} {closed}");
}

#[test]
fn stuck_diagram_is_reported() {
    let d = Diagram::new()
        .with_external("z1", pt(0.0, 0.0))
        .with_external("z2", pt(1.0, 0.0))
        .with_external("z3", pt(0.0, 1.0))
        .with_internal("w")
        .with_edge("w", "z1", ex(0, 0.6, 0.0))
        .with_edge("w", "z2", ex(0, 0.6, 0.0))
        .with_edge("w", "z3", ex(0, 0.6, 0.0));
    match reduce(&d) {
        Err(DiagramError::StuckDiagram(left)) => assert_eq!(left.internal, vec!["w".to_string()]),
        other => panic!("{other:?}"),
    }
}

#[test]
fn json_round_trip() {
    let d = double_chain().with_wave("w1", "p").with_prefactor(
        ClosedFormFactor::one()
            .times_pi(-2)
            .times_i(3)
            .times_gamma(ex(2, 0.1 / 3.0, 0.7), -1)
            .times_momentum("p", ex(-1, 0.25, 1.0 / 7.0)),
    );
    let s = diagram_to_json(&d).unwrap();
    assert!(s.contains("3.3333333333333333e-2") || s.contains("3.3333333333333335e-2"), "{s}");
    let back = diagram_from_json(&s).unwrap();
    assert_eq!(back, d);
    assert_eq!(diagram_to_json(&back).unwrap(), s);

    let f = reduce(&double_chain()).unwrap().factor;
    assert_eq!(factor_from_json(&factor_to_json(&f).unwrap()).unwrap(), f);

    assert!(diagram_from_json(r#"{"external":[{"label":"a"}],"internal":[],"edges":[]}"#).is_err());
}

fn arb_exponent() -> impl Strategy<Value = FieldExponent> {
    (-3i32..=3, -2.0f64..3.0, -2.0f64..2.0).prop_map(|(m, re, im)| ex(m, re, im))
}

fn arb_factor() -> impl Strategy<Value = ClosedFormFactor> {
    (
        -3i32..=3,
        -7i32..=7,
        prop::bool::ANY,
        prop::collection::vec((arb_exponent(), -2i32..=2), 0..6),
        prop::collection::vec((prop::sample::select(vec!["p", "q"]), arb_exponent()), 0..3),
    )
        .prop_map(|(k, q, neg, gs, ms)| {
            let mut f = ClosedFormFactor::one().times_pi(k).times_i(q).times_sign(if neg { -1 } else { 1 });
            for (u, mult) in gs {
                f = f.times_gamma(u, mult);
            }
            for (s, a) in ms {
                f = f.times_momentum(s, a);
            }
            f
        })
}

proptest! {
    #[test]
    fn canonical_is_idempotent(f in arb_factor()) {
        let c = f.canonical();
        prop_assert_eq!(c.canonical(), c.clone());
        prop_assert!(c.sign == 1 || c.sign == -1);
        prop_assert!((0..=3).contains(&c.phase_quarter_turns));
        prop_assert!(c.gamma_factors.iter().all(|g| g.mult > 0 && g.u.m() >= 0));
    }

    #[test]
    fn canonical_keeps_value(f in arb_factor()) {
        let b: HashMap<String, Complex64> = [("p".to_string(), c64(0.6, -0.3)), ("q".to_string(), c64(-1.1, 0.4))].into();
        if let (Ok(x), Ok(y)) = (f.eval(&b), f.canonical().eval(&b)) {
            prop_assert!((x - y).norm() <= 1e-9 * x.norm().max(1e-300), "{} {}", x, y);
        }
    }
}
