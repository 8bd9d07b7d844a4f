//! The operator series evaluated on a single monomial.
//!
//! Acting on `x1^m1 ... xr^mr` the Euler operators become the exponents, so
//! every `(-delta_j)_k` turns into `(-m_j)_k`, which vanishes for `k > m_j`.
//! Each series below therefore terminates and can be summed exactly.

use crate::error::{Error, Result};
use crate::kernel::{factorial, pochhammer, Rational};

fn neg(k: u32) -> Rational {
    -Rational::from(k)
}

fn divide(num: Rational, den: Rational) -> Result<Rational> {
    num.checked_div(&den)
        .map_err(|_| Error::SingularParameter("vanishing denominator in a terminating operator sum".into()))
}

/// `nabla(h)` on `x^m y^n`: `sum_k (-m)_k (-n)_k / ((h)_k k!)`.
pub fn nabla_sum(h: &Rational, m: u32, n: u32) -> Result<Rational> {
    let mut s = Rational::zero();
    for k in 0..=m.min(n) {
        let num = pochhammer(&neg(m), k) * pochhammer(&neg(n), k);
        s = s + divide(num, pochhammer(h, k) * factorial(k))?;
    }
    Ok(s)
}

/// `delta(h)` on `x^m y^n`: `sum_k (-m)_k (-n)_k / ((1-h-m-n)_k k!)`.
pub fn delta_sum(h: &Rational, m: u32, n: u32) -> Result<Rational> {
    let c = Rational::one() - h - Rational::from(m + n);
    let mut s = Rational::zero();
    for k in 0..=m.min(n) {
        let num = pochhammer(&neg(m), k) * pochhammer(&neg(n), k);
        s = s + divide(num, pochhammer(&c, k) * factorial(k))?;
    }
    Ok(s)
}

/// Second form of `delta(h)`:
/// `sum_k (-1)^k (h)_{2k} (-m)_k (-n)_k / ((h+k-1)_k (m+h)_k (n+h)_k k!)`.
pub fn delta_sum_alt(h: &Rational, m: u32, n: u32) -> Result<Rational> {
    let mut s = Rational::zero();
    for k in 0..=m.min(n) {
        let mut num = pochhammer(h, 2 * k) * pochhammer(&neg(m), k) * pochhammer(&neg(n), k);
        if k % 2 == 1 {
            num = -num;
        }
        let den = pochhammer(&(h + Rational::from(k) - Rational::one()), k)
            * pochhammer(&(h + Rational::from(m)), k)
            * pochhammer(&(h + Rational::from(n)), k)
            * factorial(k);
        s = s + divide(num, den)?;
    }
    Ok(s)
}

/// `c[K] = sum over |k| = K of prod_j (-m_j)_{k_j} / k_j!`, a convolution of
/// one terminating sequence per exponent.
fn rest_sums(rest: &[u32]) -> Vec<Rational> {
    let mut c = vec![Rational::one()];
    for &m in rest {
        let b: Vec<Rational> = (0..=m)
            .map(|k| divide(pochhammer(&neg(m), k), factorial(k)).expect("factorial is nonzero"))
            .collect();
        let mut next = vec![Rational::zero(); c.len() + b.len() - 1];
        for (i, ci) in c.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                next[i + j] = &next[i + j] + ci * bj;
            }
        }
        c = next;
    }
    c
}

/// `sum_K outer(K) c[K]` for `K <= lead`, where the tilde series depend on
/// the inner indices only through `c`.
fn tilde_sum<F>(lead: u32, rest: &[u32], mut outer: F) -> Result<Rational>
where
    F: FnMut(u32) -> Result<Rational>,
{
    let c = rest_sums(rest);
    let mut s = Rational::zero();
    for (k, ck) in c.iter().enumerate().take(lead as usize + 1) {
        if !ck.is_zero() {
            s = s + outer(k as u32)? * ck;
        }
    }
    Ok(s)
}

/// Tilde `nabla(h)` with lead exponent `lead` and the remaining exponents `rest`:
/// `sum (-m1)_{|k|} prod (-m_j)_{k_j} / ((h)_{|k|} prod k_j!)`.
pub fn nabla_tilde_sum(h: &Rational, lead: u32, rest: &[u32]) -> Result<Rational> {
    tilde_sum(lead, rest, |k| divide(pochhammer(&neg(lead), k), pochhammer(h, k)))
}

/// Tilde `delta(h)`, first form: the denominator is `(1-h-m1-...-mr)_{|k|}`.
pub fn delta_tilde_sum(h: &Rational, lead: u32, rest: &[u32]) -> Result<Rational> {
    let c = Rational::one() - h - Rational::from(lead + rest.iter().sum::<u32>());
    tilde_sum(lead, rest, |k| divide(pochhammer(&neg(lead), k), pochhammer(&c, k)))
}

/// Tilde `delta(h)`, second form:
/// `sum (-1)^K (h)_{2K} (-m1)_K prod (-m_j)_{k_j}
///   / ((h+K-1)_K (m1+h)_K (m2+...+mr+h)_K prod k_j!)` with `K = |k|`.
pub fn delta_tilde_sum_alt(h: &Rational, lead: u32, rest: &[u32]) -> Result<Rational> {
    let rest_total: u32 = rest.iter().sum();
    tilde_sum(lead, rest, |k| {
        let mut num = pochhammer(h, 2 * k) * pochhammer(&neg(lead), k);
        if k % 2 == 1 {
            num = -num;
        }
        let den = pochhammer(&(h + Rational::from(k) - Rational::one()), k)
            * pochhammer(&(h + Rational::from(lead)), k)
            * pochhammer(&(h + Rational::from(rest_total)), k);
        divide(num, den)
    })
}

/// The extra Pochhammer factor appearing in the displayed `nabla(h) delta(l)`
/// product series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductFactor {
    /// `(l)_{2l}` literally; needs `2l` to be a nonnegative integer.
    Literal,
    /// `(l)_{2k}`.
    TwoK,
    /// No extra factor.
    Omitted,
}

fn product_factor(l: &Rational, k: u32, factor: ProductFactor) -> Result<Rational> {
    match factor {
        ProductFactor::Literal => {
            let len = (l * Rational::from(2))
                .to_i64()
                .filter(|v| *v >= 0)
                .ok_or_else(|| Error::BadParams(format!("(l)_{{2l}} is undefined for l = {l}")))?;
            Ok(pochhammer(l, len as u32))
        }
        ProductFactor::TwoK => Ok(pochhammer(l, 2 * k)),
        ProductFactor::Omitted => Ok(Rational::one()),
    }
}

/// First displayed series for `nabla(h) delta(l)` on `x^m y^n`:
/// `sum_k (l-h)_k [factor] (-m)_k (-n)_k / ((l+k-1)_k (l+m)_k (l+n)_k k!)`.
///
/// `h_denominator` adds a `(h)_k` to the denominator.
pub fn nabla_delta_sum(
    h: &Rational,
    l: &Rational,
    m: u32,
    n: u32,
    factor: ProductFactor,
    h_denominator: bool,
) -> Result<Rational> {
    let mut s = Rational::zero();
    for k in 0..=m.min(n) {
        let kk = Rational::from(k);
        let num = pochhammer(&(l - h), k)
            * product_factor(l, k, factor)?
            * pochhammer(&neg(m), k)
            * pochhammer(&neg(n), k);
        let mut den = pochhammer(&(l + &kk - Rational::one()), k)
            * pochhammer(&(l + Rational::from(m)), k)
            * pochhammer(&(l + Rational::from(n)), k)
            * factorial(k);
        if h_denominator {
            den = den * pochhammer(h, k);
        }
        s = s + divide(num, den)?;
    }
    Ok(s)
}

/// Second displayed series for `nabla(h) delta(l)` on `x^m y^n`:
/// `sum_k (h-l)_k [factor] (-m)_k (-n)_k / ((h)_k (1-l-m-n)_k k!)`.
pub fn nabla_delta_sum_alt(h: &Rational, l: &Rational, m: u32, n: u32, factor: ProductFactor) -> Result<Rational> {
    let c = Rational::one() - l - Rational::from(m + n);
    let mut s = Rational::zero();
    for k in 0..=m.min(n) {
        let num = pochhammer(&(h - l), k)
            * product_factor(l, k, factor)?
            * pochhammer(&neg(m), k)
            * pochhammer(&neg(n), k);
        let den = pochhammer(h, k) * pochhammer(&c, k) * factorial(k);
        s = s + divide(num, den)?;
    }
    Ok(s)
}

/// Which readings of the displayed product series reproduce
/// `nabla(h) delta(l)` for all `0 <= m, n <= max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductFormCheck {
    pub first_literal: bool,
    pub first_two_k: bool,
    pub first_two_k_with_h: bool,
    pub second_literal: bool,
    pub second_two_k: bool,
    pub second_omitted: bool,
}

pub fn check_product_forms(h: &Rational, l: &Rational, max: u32) -> Result<ProductFormCheck> {
    let target = |m: u32, n: u32| -> Result<Rational> {
        let a = pochhammer(h, m + n).checked_div(&(pochhammer(h, m) * pochhammer(h, n)))?;
        let b = (pochhammer(l, m) * pochhammer(l, n)).checked_div(&pochhammer(l, m + n))?;
        Ok(a * b)
    };
    let grid: Vec<(u32, u32)> = (0..=max).flat_map(|m| (0..=max).map(move |n| (m, n))).collect();
    let all = |f: &dyn Fn(u32, u32) -> Result<Rational>| -> Result<bool> {
        for &(m, n) in &grid {
            if f(m, n)? != target(m, n)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    use ProductFactor::*;
    Ok(ProductFormCheck {
        first_literal: all(&|m, n| nabla_delta_sum(h, l, m, n, Literal, false))?,
        first_two_k: all(&|m, n| nabla_delta_sum(h, l, m, n, TwoK, false))?,
        first_two_k_with_h: all(&|m, n| nabla_delta_sum(h, l, m, n, TwoK, true))?,
        second_literal: all(&|m, n| nabla_delta_sum_alt(h, l, m, n, Literal))?,
        second_two_k: all(&|m, n| nabla_delta_sum_alt(h, l, m, n, TwoK))?,
        second_omitted: all(&|m, n| nabla_delta_sum_alt(h, l, m, n, Omitted))?,
    })
}
