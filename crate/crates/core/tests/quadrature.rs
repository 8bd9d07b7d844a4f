mod common;

use common::{float, rel};
use hyper3::catalog::{eval, EvalOptions, FunctionId};
use hyper3::quadrature::{consistency_sweep, default_sweep_profile, quad_eval, IntegralRepId, QuadConfig, QuadRule};
use hyper3::Error;

use IntegralRepId::*;

fn series(f: FunctionId, s: &str, pt: &[f64]) -> f64 {
    eval(f, &float(s), pt, EvalOptions::with_tol(1e-15)).unwrap().value
}

#[test]
fn laplace_form_at_the_origin_is_one() {
    let ps = float("alpha=1.5,beta1=1.5,beta2=1.5,gamma=2.5");
    let r = quad_eval(R6_8, &ps, &[0.0; 3], QuadConfig::for_rep(R6_8, 32)).unwrap();
    assert!((r.value - 1.0).abs() <= 1e-10, "{}", r.value);
}

#[test]
fn unit_square_form_matches_ha() {
    let s = "alpha=0.5,beta1=1.5,beta2=1.5,gamma1=3,gamma2=3";
    let r = quad_eval(R5_1, &float(s), &[0.1; 3], QuadConfig::for_rep(R5_1, 80)).unwrap();
    assert!(rel(r.value, series(FunctionId::HA, s, &[0.1; 3])) <= 1e-8);
}

#[test]
fn laplace_form_matches_ha() {
    let s = "alpha=1.5,beta1=1.5,beta2=1.5,gamma1=2.5,gamma2=2.5";
    let r = quad_eval(R6_4, &float(s), &[0.05; 3], QuadConfig::for_rep(R6_4, 48)).unwrap();
    assert!(rel(r.value, series(FunctionId::HA, s, &[0.05; 3])) <= 1e-6);
}

#[test]
fn paired_representations_agree() {
    let (_, ps) = default_sweep_profile();
    let q = |rep| quad_eval(rep, &ps, &[0.05; 3], QuadConfig::for_rep(rep, 32)).unwrap().value;
    assert!(rel(q(R6_5), q(R6_4)) <= 1e-6);
    assert!(rel(q(R6_7), q(R6_6)) <= 1e-6);
}

#[test]
fn sweep_rows_and_ordering() {
    let prof = default_sweep_profile();
    let one = consistency_sweep(&[R6_8], std::slice::from_ref(&prof), &[[0.05; 3]], 16, 1e-6);
    assert_eq!(one.rows.len(), 1);
    assert!(one.all_ok());

    let two = consistency_sweep(&[R6_4, R6_5], &[prof], &[[0.05; 3], [0.02, 0.03, 0.01]], 24, 1e-6);
    assert_eq!(two.rows.len(), 4);
    assert_eq!(two.rows[0].rep, R6_4);
    assert_eq!(two.rows[3].rep, R6_5);
    for r in &two.rows {
        assert_eq!(r.status, "ok");
        let d = (r.quad.unwrap() - r.series.unwrap()).abs();
        assert!(d <= r.quad_error_estimate.unwrap() + 1e-12, "{r:?}");
    }
    let back = hyper3::quadrature::SweepReport::from_json(&two.to_json()).unwrap();
    assert_eq!(back.to_json(), two.to_json());
}

#[test]
fn refinement_shrinks_the_error() {
    let (_, ps) = default_sweep_profile();
    for rep in [R5_1, R6_1, R6_4, R6_6, R6_8] {
        let target = eval(rep.target(), &ps, &[0.05; 3], EvalOptions::with_tol(1e-15)).unwrap().value;
        let e4 = (quad_eval(rep, &ps, &[0.05; 3], QuadConfig::for_rep(rep, 4)).unwrap().value - target).abs();
        let e8 = (quad_eval(rep, &ps, &[0.05; 3], QuadConfig::for_rep(rep, 8)).unwrap().value - target).abs();
        assert!(e8 < e4, "{rep}: {e4:e} -> {e8:e}");
    }
}

#[test]
fn config_and_constraint_errors() {
    let (_, ps) = default_sweep_profile();
    let bad_n = QuadConfig { nodes_per_axis: 3, rule: QuadRule::GaussLaguerre };
    assert!(matches!(quad_eval(R6_8, &ps, &[0.0; 3], bad_n), Err(Error::BadConfig(_))));
    let wrong_rule = QuadConfig { nodes_per_axis: 16, rule: QuadRule::GaussLegendre01 };
    assert!(matches!(quad_eval(R6_8, &ps, &[0.0; 3], wrong_rule), Err(Error::BadConfig(_))));

    // beta1 - 1 < 0 puts a singular factor at the endpoint
    let s = float("alpha=0.5,beta1=0.5,beta2=1.5,gamma1=3,gamma2=3");
    assert!(matches!(quad_eval(R5_1, &s, &[0.1; 3], QuadConfig::for_rep(R5_1, 16)), Err(Error::ConstraintViolated(_))));
    // gamma1 - beta1 <= 0
    let s = float("alpha=0.5,beta1=3,beta2=1.5,gamma1=3,gamma2=3");
    assert!(matches!(quad_eval(R5_1, &s, &[0.1; 3], QuadConfig::for_rep(R5_1, 16)), Err(Error::ConstraintViolated(_))));
    // the base of (1 - x xi - ...)^(-alpha) turns negative inside the square
    let s = float("alpha=0.5,beta1=1.5,beta2=1.5,gamma1=3,gamma2=3");
    assert!(matches!(quad_eval(R5_1, &s, &[1.5, 0.1, 0.1], QuadConfig::for_rep(R5_1, 16)), Err(Error::IntegrandSingular(_))));
}

#[test]
fn sweep_records_errors_without_aborting() {
    let bad = ("bad".to_string(), float("alpha=0.5,beta1=0.5,beta2=1.5,gamma1=3,gamma2=3"));
    let r = consistency_sweep(&[R5_1, R6_8], &[bad], &[[0.05; 3]], 8, 1e-6);
    assert_eq!(r.rows.len(), 2);
    assert!(r.rows.iter().all(|row| row.status == "error" && row.error.is_some()));
    assert!(!r.all_ok());
}
