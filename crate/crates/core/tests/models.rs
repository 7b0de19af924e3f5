use std::f64::consts::{PI, SQRT_2};

use proptest::prelude::*;
use quinticate::chebyshev::{
    model_coefficients, model_coefficients_by_quadrature, recommended_nodes,
};
use quinticate::models::{relativistic_time_closed_form, ModelKind, OscillatorModel, PeriodMethod};
use quinticate::quad::integrate;
use quinticate::quintic::{classify, discriminant, Case};
use quinticate::validation::period_ratio;

fn model(kind: ModelKind, a: f64, b: f64) -> OscillatorModel {
    match kind {
        ModelKind::Relativistic => OscillatorModel::relativistic(a),
        ModelKind::CableMass => OscillatorModel::cable_mass(a, b),
        ModelKind::DuffingRelativistic => OscillatorModel::duffing_relativistic(a, b),
        ModelKind::Generic => unreachable!(),
    }
}

/// `2 ∫_{-1}^{1} ds / √Φ(s)` with `s = sin φ`, using the unfactored `Φ`.
/// Gauss–Kronrod nodes are interior, so the endpoints are never evaluated.
fn period_oracle(m: &OscillatorModel) -> f64 {
    let half = integrate(
        |phi: f64| phi.cos() / m.potential(phi.sin()).sqrt(),
        -PI / 2.0,
        PI / 2.0,
        0.0,
        1e-13,
    )
    .unwrap();
    2.0 * half
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exact_periods_match_the_period_integral(
        kind in prop_oneof![
            Just(ModelKind::Relativistic),
            Just(ModelKind::CableMass),
            Just(ModelKind::DuffingRelativistic)
        ],
        a in 0.05f64..30.0,
        b in 0.05f64..1.0,
    ) {
        let m = model(kind, a, b);
        let exact = m.exact_period().unwrap();
        prop_assert!(((exact.value - period_oracle(&m)) / exact.value).abs() < 1e-9);
        prop_assert!((4.0 * m.time_integral(0.0).unwrap() / exact.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn potential_is_twice_the_work(a in 0.1f64..20.0, b in 0.05f64..1.0, u in -1.0f64..1.0) {
        for kind in [ModelKind::Relativistic, ModelKind::CableMass, ModelKind::DuffingRelativistic] {
            let m = model(kind, a, b);
            let work = integrate(|s| m.restoring_force(s), u, 1.0, 1e-15, 1e-14).unwrap();
            prop_assert!((m.potential(u) + 2.0 * work).abs() < 1e-12 * m.potential(0.0).max(1.0));
            prop_assert!((m.potential(u) - m.potential(-u)).abs() < 1e-14 * m.potential(0.0).max(1.0));
        }
    }

    #[test]
    fn relativistic_time_closed_form_matches_quadrature(a in 0.05f64..30.0, u in -0.99f64..1.0) {
        let m = OscillatorModel::relativistic(a);
        let closed = relativistic_time_closed_form(a, u).unwrap();
        prop_assert!((closed - m.time_integral(u).unwrap()).abs() < 1e-10 * closed.max(1.0));
    }
}

#[test]
fn closed_form_methods() {
    assert_eq!(
        OscillatorModel::relativistic(1.0)
            .exact_period()
            .unwrap()
            .method,
        PeriodMethod::ClosedFormKe
    );
    assert_eq!(
        OscillatorModel::cable_mass(1.0, 1.0)
            .exact_period()
            .unwrap()
            .method,
        PeriodMethod::ClosedFormPi
    );
    assert_eq!(
        OscillatorModel::duffing_relativistic(1.0, 1.0)
            .exact_period()
            .unwrap()
            .method,
        PeriodMethod::Quadrature
    );
}

#[test]
fn relativistic_values() {
    let m = OscillatorModel::relativistic(1.0);
    assert!((m.restoring_force(1.0) + 1.0 / SQRT_2).abs() < 1e-15);
    assert!((m.potential(0.0) - 2.0 * (SQRT_2 - 1.0)).abs() < 1e-15);
    assert!(
        (OscillatorModel::relativistic(1e-4)
            .exact_period()
            .unwrap()
            .value
            - 2.0 * PI)
            .abs()
            < 1e-7
    );
    let d = OscillatorModel::duffing_relativistic(1.0, 1.0);
    assert!((d.restoring_force(1.0) + 2.0 + 1.0 / SQRT_2).abs() < 1e-15);
}

#[test]
fn validation_examples() {
    assert!(OscillatorModel::relativistic(30.0).validate().is_ok());
    assert!(OscillatorModel::cable_mass(1.0, 0.5).validate().is_ok());
    assert!(OscillatorModel::cable_mass(1.0, 0.0).validate().is_err());
    assert!(OscillatorModel::relativistic(0.0).validate().is_err());
}

#[test]
fn quadrature_route_agrees_with_closed_form_at_recommended_nodes() {
    for a in [0.5, 1.0, 2.0, 8.0, 20.0, 30.0] {
        for b in [0.3, 0.7, 1.0] {
            for kind in [
                ModelKind::Relativistic,
                ModelKind::CableMass,
                ModelKind::DuffingRelativistic,
            ] {
                let m = model(kind, a, b);
                let closed = model_coefficients(&m).unwrap();
                let quad = model_coefficients_by_quadrature(&m, recommended_nodes(&m)).unwrap();
                for (x, y) in closed.as_array().iter().zip(quad.as_array()) {
                    assert!(
                        (x - y).abs() < 1e-10 * y.abs().max(1.0),
                        "{kind} a={a} b={b}"
                    );
                }
            }
        }
    }
}

#[test]
fn cable_mass_ratio_band_and_sign_conditions() {
    for i in 1..=30 {
        for j in 1..=10 {
            let (a, b) = (i as f64, 0.1 * j as f64);
            let m = OscillatorModel::cable_mass(a, b);
            let c = model_coefficients(&m).unwrap();
            assert!(c.c5 > 0.0 && discriminant(&c).delta <= 0.0, "a={a} b={b}");
            let r = period_ratio(&m).unwrap().ratio;
            assert!((0.999..=1.001).contains(&r), "a={a} b={b} ratio={r}");
        }
    }
}

#[test]
fn relativistic_discriminant_stays_negative() {
    for i in 1..=300 {
        let c = model_coefficients(&OscillatorModel::relativistic(0.1 * i as f64)).unwrap();
        assert_eq!(classify(&c), Case::CaseI);
    }
}

#[test]
fn models_round_trip_through_json() {
    let m = OscillatorModel::cable_mass(1.0, 0.5);
    let text = serde_json::to_string(&m).unwrap();
    assert_eq!(text, r#"{"kind":"cable-mass","a":1.0,"b":0.5}"#);
    assert_eq!(serde_json::from_str::<OscillatorModel>(&text).unwrap(), m);
    let g: OscillatorModel =
        serde_json::from_str(r#"{"kind":"generic","a":2.0,"force":[-1.0,-0.5]}"#).unwrap();
    assert_eq!(g.kind, ModelKind::Generic);
    assert_eq!(g.force.as_deref(), Some(&[-1.0, -0.5][..]));
}
