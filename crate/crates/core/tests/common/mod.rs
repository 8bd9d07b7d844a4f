#![allow(dead_code)]

use hyper3::catalog::ParamSet;
use hyper3::kernel::Rational;

pub fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

pub fn ratio(a: Rational, b: Rational) -> Rational {
    a.checked_div(&b).unwrap()
}

/// Rising factorial by repeated multiplication.
pub fn rising(a: &Rational, k: u32) -> Rational {
    (0..k).map(|j| a + Rational::from(j)).product()
}

pub fn fact(k: u32) -> Rational {
    (1..=k).map(Rational::from).product()
}

/// Same, in floating point.
pub fn rising_f(a: f64, k: u32) -> f64 {
    (0..k).map(|j| a + j as f64).product()
}

pub fn exact(s: &str) -> ParamSet<Rational> {
    ParamSet::parse_exact(s).unwrap()
}

pub fn float(s: &str) -> ParamSet<f64> {
    ParamSet::parse_float(s).unwrap()
}

pub const P1: &str = "alpha=1/2,beta1=1/3,beta2=1/4,gamma=13/5,gamma1=5/2,gamma2=7/3,gamma3=9/4";
pub const P2: &str = "alpha=2/7,beta1=3/5,beta2=5/6,gamma=17/6,gamma1=11/4,gamma2=13/5,gamma3=19/7";
pub const P3: &str = "alpha=3/4,beta1=2/9,beta2=4/7,gamma=23/8,gamma1=31/10,gamma2=17/7,gamma3=29/9";

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
