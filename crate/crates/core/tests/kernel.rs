mod common;

use common::{fact, q, rising};
use hyper3::kernel::{binomial_series, pochhammer, Axis, MultiIndex3, Rational, TruncatedSeries};
use hyper3::Error;
use proptest::prelude::*;

fn x(k: u32) -> MultiIndex3 {
    MultiIndex3::new(k, 0, 0)
}

#[test]
fn pochhammer_values() {
    assert_eq!(pochhammer(&q("7/3"), 0), Rational::one());
    assert_eq!(pochhammer(&q("-3"), 5), Rational::zero());
    assert_eq!(pochhammer(&q("3"), 4), Rational::from(3 * 4 * 5 * 6));
}

#[test]
fn rationals_stay_reduced() {
    let r = q("6/-8");
    assert_eq!(r.to_string(), "-3/4");
    assert_eq!(*r.denom(), 4.into());
    assert_eq!(q("0/5"), Rational::zero());
    assert!(matches!(q("1/2").checked_div(&Rational::zero()), Err(Error::DivisionByZero)));
    assert!("1.5".parse::<Rational>().is_err());
    assert!("1/0".parse::<Rational>().is_err());
}

#[test]
fn product_examples() {
    let one = TruncatedSeries::one(4);
    assert_eq!(one.mul(&one).unwrap(), one);

    let a = TruncatedSeries::from_terms(2, [(x(0), q("1")), (x(1), q("1"))]);
    let b = TruncatedSeries::from_terms(2, [(x(0), q("1")), (x(1), q("-1"))]);
    let want = TruncatedSeries::from_terms(2, [(x(0), q("1")), (x(2), q("-1"))]);
    assert_eq!(a.mul(&b).unwrap(), want);

    // geometric series squared, by explicit convolution over all pairs
    let geo = TruncatedSeries::from_fn(3, |i| Ok(if i.n + i.p == 0 { Rational::one() } else { Rational::zero() })).unwrap();
    let sq = geo.mul(&geo).unwrap();
    for k in 0..=3u32 {
        let pairs = (0..=3u32).flat_map(|i| (0..=3u32).map(move |j| (i, j))).filter(|(i, j)| i + j == k).count() as i64;
        assert_eq!(sq.coeff(x(k)), Rational::from(pairs));
    }
    assert_eq!(sq.nnz(), 4);
}

#[test]
fn caps_must_match() {
    let a = TruncatedSeries::one(2);
    let b = TruncatedSeries::one(3);
    assert!(matches!(a.mul(&b), Err(Error::CapMismatch(2, 3))));
    assert!(matches!(a.add(&b), Err(Error::CapMismatch(2, 3))));
}

#[test]
fn binomial_examples() {
    assert_eq!(binomial_series(&q("5/7"), Axis::Y, -1, 0), TruncatedSeries::one(0));

    let s = binomial_series(&q("-2"), Axis::Y, -1, 2);
    let y = |k| MultiIndex3::new(0, k, 0);
    let want = TruncatedSeries::from_terms(2, [(y(0), q("1")), (y(1), q("2")), (y(2), q("3"))]);
    assert_eq!(s, want);

    let s = binomial_series(&q("1"), Axis::Z, 1, 3);
    let z = |k| MultiIndex3::new(0, 0, k);
    assert_eq!(s, TruncatedSeries::from_terms(3, [(z(0), q("1")), (z(1), q("1"))]));
}

#[test]
fn monomials_above_cap_are_dropped() {
    let s = TruncatedSeries::monomial(MultiIndex3::new(2, 2, 0), q("1"), 3);
    assert!(s.is_zero());
    let t = TruncatedSeries::monomial(MultiIndex3::new(1, 1, 0), q("1"), 3);
    assert!(t.mul(&t).unwrap().is_zero());
}

#[test]
fn graded_order() {
    for cap in 0..=8u32 {
        let v: Vec<MultiIndex3> = MultiIndex3::graded(cap).collect();
        assert_eq!(v.len() as u32, (cap + 1) * (cap + 2) * (cap + 3) / 6);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }
    let first: Vec<[u32; 3]> = MultiIndex3::graded(1).map(|i| i.as_array()).collect();
    assert_eq!(first, [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]);
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=9).prop_map(|(a, b)| Rational::new(a, b).unwrap())
}

fn series(cap: u32) -> impl Strategy<Value = TruncatedSeries> {
    let len = MultiIndex3::graded(cap).count();
    prop::collection::vec(prop::option::weighted(0.6, small_rational()), len).prop_map(move |cs| {
        let terms = MultiIndex3::graded(cap).zip(cs).filter_map(|(i, c)| c.map(|c| (i, c)));
        TruncatedSeries::from_terms(cap, terms)
    })
}

fn three_series() -> impl Strategy<Value = (TruncatedSeries, TruncatedSeries, TruncatedSeries)> {
    (0u32..=6).prop_flat_map(|cap| (series(cap), series(cap), series(cap)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_laws((a, b, c) in three_series()) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert!(a.sub(&a).unwrap().is_zero());
        let one = TruncatedSeries::one(a.cap());
        prop_assert_eq!(a.mul(&one).unwrap(), a.clone());
    }

    #[test]
    fn product_respects_cap((a, b, _c) in three_series()) {
        let p = a.mul(&b).unwrap();
        prop_assert_eq!(p.cap(), a.cap());
        prop_assert!(p.terms().all(|(i, c)| i.total() <= a.cap() && !c.is_zero()));
    }

    #[test]
    fn pochhammer_splits(a in small_rational(), j in 0u32..=12, k in 0u32..=12) {
        let aj = &a + Rational::from(j);
        prop_assert_eq!(pochhammer(&a, j + k), pochhammer(&a, j) * pochhammer(&aj, k));
        prop_assert_eq!(pochhammer(&a, k), rising(&a, k));
    }

    #[test]
    fn pochhammer_terminates(m in 0u32..12, extra in 1u32..6) {
        let k = m + extra;
        prop_assert!(pochhammer(&-Rational::from(m), k).is_zero());
        prop_assert_eq!(pochhammer(&Rational::one(), k), fact(k));
    }

    #[test]
    fn rational_string_round_trip(a in small_rational()) {
        prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a.clone());
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<Rational>(&json).unwrap(), a);
    }
}
