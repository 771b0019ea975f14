mod common;

use std::f64::consts::{E, PI};

use logbessel::kernels::{
    karatsuba_gamma_bounds, lambert_w0, lambert_w0_ln, log_gamma, w0_lower_bound_hh, w0_lower_bound_hh_ln,
    w0_upper_bound_hh, w0_upper_bound_hh_ln, yang_chu_coefficients,
};
use logbessel::Error;
use proptest::prelude::*;

#[test]
fn lambert_examples() {
    assert_eq!(lambert_w0(0.0).unwrap(), 0.0);
    assert!((lambert_w0(E).unwrap() - 1.0).abs() <= 2.0 * f64::EPSILON);
    assert!((lambert_w0(1.0).unwrap() - common::w0_bisect(1.0)).abs() <= 2.0 * f64::EPSILON);
    assert!((lambert_w0(-1.0 / E).unwrap() + 1.0).abs() < 1e-7);
    assert!(matches!(lambert_w0(-0.5), Err(Error::Domain { .. })));
}

#[test]
fn hoorfar_hassani_examples() {
    assert!((w0_upper_bound_hh(E).unwrap() - 1.0).abs() < 1e-15);
    assert!((w0_lower_bound_hh(E).unwrap() - 1.0).abs() < 1e-15);
    let ee = E.powf(E);
    let w = common::w0_bisect(ee);
    assert!((w - 2.016).abs() < 1e-3);
    let up = w0_upper_bound_hh(ee).unwrap();
    assert!((up - 2.300).abs() < 1e-3 && up >= w);
    let lo = w0_lower_bound_hh(ee).unwrap();
    assert!((lo - (E - 1.0 + 0.5 / E)).abs() < 1e-12 && lo <= w);
    assert!(w0_lower_bound_hh(100.0).unwrap() <= common::w0_bisect(100.0));
    assert!(w0_upper_bound_hh(1e6).unwrap() >= common::w0_bisect(1e6));
    assert!(matches!(w0_upper_bound_hh(2.0), Err(Error::Domain { .. })));
    assert!(matches!(w0_lower_bound_hh_ln(0.5), Err(Error::Domain { .. })));
}

#[test]
fn gamma_examples() {
    assert_eq!(log_gamma(1.0).unwrap(), 0.0);
    assert!((log_gamma(0.5).unwrap() - PI.sqrt().ln()).abs() < 1e-15);
    assert!(karatsuba_gamma_bounds(1.0).unwrap().contains_ln(0.0));
    assert!(karatsuba_gamma_bounds(5.0).unwrap().contains_ln(120f64.ln()));
    let b = karatsuba_gamma_bounds(100.5).unwrap();
    assert!(b.contains_ln(statrs::function::gamma::ln_gamma(101.5)));
    assert!(karatsuba_gamma_bounds(170.5).unwrap().contains_ln(log_gamma(171.5).unwrap()));
    assert!(b.lo() < b.hi());
    assert!(matches!(log_gamma(0.0), Err(Error::Domain { .. })));
    assert!(matches!(karatsuba_gamma_bounds(-1.0), Err(Error::Domain { .. })));
}

#[test]
fn yang_chu_examples() {
    let c = yang_chu_coefficients(1.5).unwrap();
    for v in [c.c0, c.a1, c.b1, c.a2, c.b2] {
        assert!((v - 1.0).abs() < 1e-14, "{c:?}");
    }
    let c = yang_chu_coefficients(1.0).unwrap();
    assert!((c.c0 - 2.0 / PI).abs() < 1e-15);
    assert!((c.a1 - 2.0 / PI).abs() < 1e-15 && c.b1 == 0.75);
    let c = yang_chu_coefficients(2.0).unwrap();
    assert!((c.c0 - 2.0 * PI.powf(-1.0 / 3.0)).abs() < 1e-14);
    assert!((c.c0 - 1.365_568_126_510_591_5).abs() < 1e-14);
    assert!(matches!(yang_chu_coefficients(0.9), Err(Error::Domain { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn lambert_residual_small(x in -1.0 / E..10.0) {
        let w = lambert_w0(x).unwrap();
        prop_assert!(w >= -1.0);
        // the residual itself is computed with a rounding error of about (1 + |w|) ulps of x
        let tol = 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) * (1.0 + w.abs()) + 1e-300;
        prop_assert!((w * w.exp() - x).abs() <= tol, "x = {}, w = {}", x, w);
    }

    #[test]
    fn lambert_residual_large(lx in 1.0f64..9.0) {
        let x = 10f64.powf(lx);
        let w = lambert_w0(x).unwrap();
        // log space: w + log w = log x
        let r = w + w.ln() - x.ln();
        prop_assert!(r.abs() <= 4.0 * f64::EPSILON * x.ln(), "x = {}, residual {}", x, r);
    }

    #[test]
    fn lambert_log_form(l in 1.0f64..1e6) {
        let w = lambert_w0_ln(l).unwrap();
        let o = common::w0_ln_bisect(l);
        prop_assert!((w - o).abs() <= 4.0 * f64::EPSILON * o, "{} vs {}", w, o);
    }

    #[test]
    fn hoorfar_hassani_bracket(lx in 1.0f64..700.0) {
        let x = lx.exp();
        let w = lambert_w0(x).unwrap();
        let slack = 4.0 * f64::EPSILON * w;
        prop_assert!(w0_lower_bound_hh(x).unwrap() <= w + slack);
        prop_assert!(w <= w0_upper_bound_hh(x).unwrap() + slack);
    }

    #[test]
    fn hoorfar_hassani_bracket_log_form(l in 1.0f64..1e12) {
        let w = common::w0_ln_bisect(l);
        let slack = 4.0 * f64::EPSILON * w;
        prop_assert!(w0_lower_bound_hh_ln(l).unwrap() <= w + slack);
        prop_assert!(w <= w0_upper_bound_hh_ln(l).unwrap() + slack);
    }

    #[test]
    fn karatsuba_bracket(x in 1e-6f64..170.0) {
        let b = karatsuba_gamma_bounds(x).unwrap();
        prop_assert!(b.contains_ln(log_gamma(1.0 + x).unwrap()));
        prop_assert!(b.contains_ln(statrs::function::gamma::ln_gamma(1.0 + x)));
    }

    #[test]
    fn log_gamma_matches_statrs(x in 1e-3f64..1e6) {
        let a = log_gamma(x).unwrap();
        let b = statrs::function::gamma::ln_gamma(x);
        prop_assert!((a - b).abs() <= 1e-13 * b.abs().max(1.0), "{} vs {}", a, b);
    }

    #[test]
    fn c0_bracket(nu in 1.0f64..500.0) {
        let c = yang_chu_coefficients(nu).unwrap();
        let (lo, hi) = c.c0_bracket();
        prop_assert!(lo < c.c0 && c.c0 < hi);
        prop_assert!(c.a1 <= c.b1 && c.a2 <= c.b2);
    }
}
