mod common;

use common::{exact, fact, q, ratio, rising, P1, P2, P3};
use hyper3::catalog::Param;
use hyper3::kernel::{Axis, MultiIndex3, Rational, TruncatedSeries};
use hyper3::operators::summation::{
    check_product_forms, delta_sum, delta_sum_alt, delta_tilde_sum, delta_tilde_sum_alt, nabla_sum, nabla_tilde_sum,
};
use hyper3::operators::{verify_operator_identity, DiagonalOp, OperatorChain, Verdict};
use hyper3::registry::registry;
use hyper3::Error;
use proptest::prelude::*;

use Axis::{X, Y, Z};

fn hs() -> Vec<Rational> {
    ["1/2", "1", "3/2", "2", "7/3"].into_iter().map(q).collect()
}

#[test]
fn eigenvalue_examples() {
    let n = DiagonalOp::nabla(X, Y, q("2"));
    for k in 0..5 {
        assert_eq!(n.eigenvalue(MultiIndex3::new(0, k, 3)).unwrap(), Rational::one());
    }
    // terminating sum, k = 0 and k = 1
    let by_hand = Rational::one() + ratio(q("-1") * q("-1"), q("2") * q("1"));
    assert_eq!(n.eigenvalue(MultiIndex3::new(1, 1, 0)).unwrap(), by_hand);
    assert_eq!(by_hand, q("3/2"));
    assert_eq!(DiagonalOp::delta(X, Y, q("2")).eigenvalue(MultiIndex3::new(1, 1, 0)).unwrap(), q("2/3"));
}

#[test]
fn apply_examples() {
    let xy = TruncatedSeries::monomial(MultiIndex3::new(1, 1, 0), Rational::one(), 3);
    let b = q("1/3");
    let out = OperatorChain::new(vec![DiagonalOp::nabla(X, Y, b.clone())]).apply(&xy).unwrap();
    let oracle = ratio(&b * (&b + Rational::one()), &b * &b);
    assert_eq!(out.coeff(MultiIndex3::new(1, 1, 0)), oracle);
    assert_eq!(oracle, q("4"));

    let s = TruncatedSeries::from_fn(4, |i| Ok(Rational::from(i.m * 7 + i.n * 3 + i.p + 1))).unwrap();
    assert_eq!(OperatorChain::default().apply(&s).unwrap(), s);
    let n = DiagonalOp::nabla(Y, Z, q("5/4"));
    let pair = OperatorChain::new(vec![n.clone(), n.inverse()]);
    assert_eq!(pair.apply(&s).unwrap(), s);
}

#[test]
fn singular_h_is_reported() {
    let op = DiagonalOp::delta(X, Z, q("-1"));
    assert!(matches!(op.eigenvalue(MultiIndex3::new(1, 0, 1)), Err(Error::SingularParameter(_))));
    assert!(op.eigenvalue(MultiIndex3::new(1, 0, 0)).is_ok());
}

#[test]
fn closed_forms_match_terminating_sums() {
    for h in hs() {
        for m in 0..=8u32 {
            for n in 0..=8u32 {
                let idx = MultiIndex3::new(m, n, 0);
                let nab = ratio(rising(&h, m + n), rising(&h, m) * rising(&h, n));
                let del = ratio(rising(&h, m) * rising(&h, n), rising(&h, m + n));
                assert_eq!(nabla_sum(&h, m, n).unwrap(), nab, "h={h} m={m} n={n}");
                assert_eq!(delta_sum(&h, m, n).unwrap(), del, "h={h} m={m} n={n}");
                assert_eq!(delta_sum_alt(&h, m, n).unwrap(), del, "h={h} m={m} n={n}");
                assert_eq!(DiagonalOp::nabla(X, Y, h.clone()).eigenvalue(idx).unwrap(), nab);
                assert_eq!(DiagonalOp::delta(X, Y, h.clone()).eigenvalue(idx).unwrap(), del);
            }
        }
    }
}

#[test]
fn tilde_forms_match_terminating_sums() {
    for h in hs() {
        for m in 0..=6u32 {
            for n in 0..=6u32 {
                for p in 0..=6u32 {
                    let nab = ratio(rising(&h, m + n + p), rising(&h, m) * rising(&h, n + p));
                    let del = ratio(rising(&h, m) * rising(&h, n + p), rising(&h, m + n + p));
                    assert_eq!(nabla_tilde_sum(&h, m, &[n, p]).unwrap(), nab);
                    assert_eq!(delta_tilde_sum(&h, m, &[n, p]).unwrap(), del);
                    assert_eq!(delta_tilde_sum_alt(&h, m, &[n, p]).unwrap(), del);
                    let idx = MultiIndex3::new(m, n, p);
                    assert_eq!(DiagonalOp::nabla_tilde(X, h.clone()).eigenvalue(idx).unwrap(), nab);
                    assert_eq!(DiagonalOp::delta_tilde(X, h.clone()).eigenvalue(idx).unwrap(), del);
                }
            }
        }
    }
}

#[test]
fn product_series_readings() {
    // the literal (l)_{2l} factor does not reproduce nabla(h) delta(l)
    let c = check_product_forms(&q("3/2"), &q("5/2"), 6).unwrap();
    assert!(!c.first_literal);
    assert!(!c.first_two_k);
    assert!(c.first_two_k_with_h);
    assert!(!c.second_literal);
    assert!(c.second_omitted);
}

#[test]
fn first_identity_at_degree_eight() {
    let ps = exact("alpha=1/2,beta1=1/3,beta2=1/4,gamma1=5/2,gamma2=7/3");
    assert_eq!(verify_operator_identity("3.1", &ps, 8).unwrap(), Verdict::Verified { degree: 8 });

    // hand expansion of the right side, coefficient by coefficient
    let v = |p: Param| ps.get(p).unwrap().clone();
    let (a, b1, b2, g1, g2) = (v(Param::Alpha), v(Param::Beta1), v(Param::Beta2), v(Param::Gamma1), v(Param::Gamma2));
    let rhs = registry().identity("3.1").unwrap().rhs_series(&ps, 6).unwrap();
    for i in MultiIndex3::graded(6) {
        let (m, n, p) = (i.m, i.n, i.p);
        let gauss = ratio(rising(&a, m) * rising(&b1, m), rising(&g1, m) * fact(m));
        let f1 = ratio(rising(&b2, n + p) * rising(&b1, n) * rising(&a, p), rising(&g2, n + p) * fact(n) * fact(p));
        let eig = ratio(rising(&a, m + p), rising(&a, m) * rising(&a, p))
            * ratio(rising(&b1, m + n), rising(&b1, m) * rising(&b1, n));
        assert_eq!(rhs.coeff(i), gauss * f1 * eig, "at {i}");
    }
}

#[test]
fn degree_zero_is_trivial() {
    for e in registry().identities() {
        assert_eq!(e.verify(&exact(P1), 0).unwrap(), Verdict::Verified { degree: 0 }, "{}", e.id);
    }
}

#[test]
fn perturbed_parameter_fails_at_first_order() {
    let ps = exact("alpha=1/2,beta1=1/3,beta2=1/4,gamma1=5/2,gamma2=7/3");
    let mut lhs = ps.clone();
    lhs.set(Param::Gamma1, q("7/2"));
    let e = registry().identity("3.1").unwrap();
    let ab = q("1/2") * q("1/3");
    assert_eq!(
        e.verify_split(&lhs, &ps, 2).unwrap(),
        Verdict::Failed {
            first_bad_index: MultiIndex3::new(1, 0, 0),
            expected: ratio(ab.clone(), q("7/2")),
            actual: ratio(ab, q("5/2")),
        }
    );
}

#[test]
fn identities_as_printed() {
    for p in [P1, P2, P3] {
        let ps = exact(p);
        for e in registry().identities() {
            let v = e.verify(&ps, 6).unwrap();
            assert_eq!(v.is_verified(), e.id != "3.6", "{} at {p}", e.id);
            if let Some(fix) = &e.corrected {
                assert!(e.verify_corrected(&ps, 6).unwrap().is_verified(), "{}: {}", e.id, fix.note);
            }
        }
    }
}

#[test]
fn verdicts_are_deterministic() {
    let ps = exact(P2);
    let a = verify_operator_identity("3.6", &ps, 6).unwrap();
    let b = verify_operator_identity("3.6", &ps, 6).unwrap();
    assert_eq!(a, b);
    assert!(matches!(a, Verdict::Failed { .. }));
}

#[test]
fn unknown_ids_are_rejected() {
    assert!(matches!(verify_operator_identity("3.99", &exact(P1), 2), Err(Error::UnknownIdentity(_))));
    assert!(matches!(verify_operator_identity("4.1", &exact(P1), 2), Err(Error::UnknownIdentity(_))));
}

fn any_op() -> impl Strategy<Value = DiagonalOp> {
    let axes = prop_oneof![Just((X, Y)), Just((X, Z)), Just((Y, Z)), Just((Y, X))];
    let lead = prop_oneof![Just(X), Just(Y), Just(Z)];
    let h = (1i64..=30, 1i64..=7).prop_map(|(a, b)| Rational::new(a, b).unwrap());
    (0u8..4, axes, lead, h).prop_map(|(k, (a, b), l, h)| match k {
        0 => DiagonalOp::nabla(a, b, h),
        1 => DiagonalOp::delta(a, b, h),
        2 => DiagonalOp::nabla_tilde(l, h),
        _ => DiagonalOp::delta_tilde(l, h),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_pairs_cancel(op in any_op(), m in 0u32..8, n in 0u32..8, p in 0u32..8) {
        let i = MultiIndex3::new(m, n, p);
        prop_assert_eq!(op.eigenvalue(i).unwrap() * op.inverse().eigenvalue(i).unwrap(), Rational::one());
    }

    #[test]
    fn diagonal_chains_commute(ops in prop::collection::vec(any_op(), 1..5)) {
        let s = TruncatedSeries::from_fn(5, |i| Ok(Rational::from(i.m + 2 * i.n + 3 * i.p + 1))).unwrap();
        let fwd = OperatorChain::new(ops.clone());
        let mut rev = ops;
        rev.reverse();
        let back = OperatorChain::new(rev);
        prop_assert_eq!(fwd.apply(&s).unwrap(), back.apply(&s).unwrap());
        for i in MultiIndex3::graded(5) {
            let prod: Rational = fwd.ops.iter().map(|o| o.eigenvalue(i).unwrap()).product();
            prop_assert_eq!(fwd.eigenvalue(i).unwrap(), prod);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn verified_at_d_means_verified_below(k in 0usize..15, d in 2u32..6) {
        let e = &registry().identities()[k];
        let ps = exact(P3);
        if e.verify(&ps, d).unwrap().is_verified() {
            for lower in 0..d {
                prop_assert!(e.verify(&ps, lower).unwrap().is_verified());
            }
        }
    }
}
