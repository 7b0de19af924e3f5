use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use quinticate::elliptic::{
    complete_e, complete_k, complete_pi, incomplete_e, incomplete_f, jacobi_am, jacobi_sn_cn_dn,
    Parameter,
};
use quinticate::quad::integrate;

fn quad_k(m: f64) -> f64 {
    integrate(
        |t: f64| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt(),
        0.0,
        FRAC_PI_2,
        0.0,
        1e-14,
    )
    .unwrap()
}

fn quad_e(m: f64) -> f64 {
    integrate(
        |t: f64| (1.0 - m * t.sin().powi(2)).sqrt(),
        0.0,
        FRAC_PI_2,
        0.0,
        1e-14,
    )
    .unwrap()
}

proptest! {
    #[test]
    fn legendre_relation(m in 0.001f64..0.999) {
        let (p, q) = (Parameter::new(m), Parameter::new(1.0 - m));
        let (k, e) = (complete_k(p).unwrap(), complete_e(p).unwrap());
        let (kc, ec) = (complete_k(q).unwrap(), complete_e(q).unwrap());
        prop_assert!((e * kc + ec * k - k * kc - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn complete_integrals_match_quadrature(m in -3.0f64..0.99) {
        let p = Parameter::new(m);
        prop_assert!((complete_k(p).unwrap() / quad_k(m) - 1.0).abs() < 1e-13);
        prop_assert!((complete_e(p).unwrap() / quad_e(m) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn third_kind_matches_quadrature(n in -2.0f64..0.9, m in -3.0f64..0.95) {
        let oracle = integrate(
            |t: f64| {
                let s2 = t.sin().powi(2);
                1.0 / ((1.0 - n * s2) * (1.0 - m * s2).sqrt())
            },
            0.0,
            FRAC_PI_2,
            0.0,
            1e-14,
        )
        .unwrap();
        prop_assert!((complete_pi(n, Parameter::new(m)).unwrap() / oracle - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jacobi_identities(u in -20.0f64..20.0, m in 0.0f64..0.9999) {
        let p = Parameter::new(m);
        let j = jacobi_sn_cn_dn(u, p).unwrap();
        prop_assert!((j.sn * j.sn + j.cn * j.cn - 1.0).abs() < 1e-12);
        prop_assert!((j.dn * j.dn + m * j.sn * j.sn - 1.0).abs() < 1e-12);
    }

    #[test]
    fn amplitude_inverts_first_kind(x in -1.0f64..1.0, m in 0.0f64..0.999) {
        let p = Parameter::new(m);
        let u = x * complete_k(p).unwrap();
        let phi = jacobi_am(u, p).unwrap();
        prop_assert!((incomplete_f(phi, p).unwrap() - u).abs() < 1e-11);
    }

    #[test]
    fn incomplete_second_kind_matches_quadrature(phi in 0.0f64..FRAC_PI_2, m in 0.0f64..1.0) {
        let oracle = integrate(|t: f64| (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, phi, 0.0, 1e-14).unwrap();
        prop_assert!((incomplete_e(phi, Parameter::new(m)).unwrap() - oracle).abs() < 1e-13);
    }

    #[test]
    fn amplitude_is_quasi_periodic(u in -5.0f64..5.0, m in 0.0f64..0.99) {
        let p = Parameter::new(m);
        let k = complete_k(p).unwrap();
        let shifted = jacobi_am(u + 2.0 * k, p).unwrap();
        prop_assert!((shifted - jacobi_am(u, p).unwrap() - PI).abs() < 1e-12);
    }
}

#[test]
fn special_values() {
    let zero = Parameter::new(0.0);
    assert!((complete_k(zero).unwrap() - FRAC_PI_2).abs() < 1e-15);
    assert!((complete_e(zero).unwrap() - FRAC_PI_2).abs() < 1e-15);
    assert_eq!(complete_e(Parameter::new(1.0)).unwrap(), 1.0);
    assert!(complete_k(Parameter::new(1.0)).is_err());
    let j = jacobi_sn_cn_dn(0.8, Parameter::new(1.0)).unwrap();
    assert!((j.sn - 0.8f64.tanh()).abs() < 1e-15);
    assert!((j.cn - 1.0 / 0.8f64.cosh()).abs() < 1e-15);
    let j = jacobi_sn_cn_dn(0.8, zero).unwrap();
    assert!((j.sn - 0.8f64.sin()).abs() < 1e-15 && (j.dn - 1.0).abs() < 1e-15);
}

#[test]
fn modulus_and_parameter_are_distinct() {
    let p = Parameter::from_modulus(0.5);
    assert_eq!(p.value(), 0.25);
    assert_eq!(p.complement().value(), 0.75);
}
