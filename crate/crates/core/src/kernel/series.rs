use std::collections::BTreeMap;
use std::fmt;

use super::{factorial, pochhammer, Axis, MultiIndex3, Rational};
use crate::compensated::CompensatedSum;
use crate::error::{Error, Result};

/// Trivariate power series truncated at total degree `cap`.
///
/// Only nonzero coefficients are stored. Every operation returns a new value.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    cap: u32,
    coeffs: BTreeMap<MultiIndex3, Rational>,
}

impl TruncatedSeries {
    pub fn zero(cap: u32) -> Self {
        Self { cap, coeffs: BTreeMap::new() }
    }

    pub fn one(cap: u32) -> Self {
        Self::constant(Rational::one(), cap)
    }

    pub fn constant(c: Rational, cap: u32) -> Self {
        Self::monomial(MultiIndex3::ZERO, c, cap)
    }

    /// `c * x^m y^n z^p`, or zero when the index is above the cap.
    pub fn monomial(idx: MultiIndex3, c: Rational, cap: u32) -> Self {
        let mut out = Self::zero(cap);
        out.insert(idx, c);
        out
    }

    /// Builds the series from a coefficient function over all indices up to `cap`.
    pub fn from_fn<F>(cap: u32, mut f: F) -> Result<Self>
    where
        F: FnMut(MultiIndex3) -> Result<Rational>,
    {
        let mut out = Self::zero(cap);
        for idx in MultiIndex3::graded(cap) {
            let c = f(idx)?;
            out.insert(idx, c);
        }
        Ok(out)
    }

    /// Collects `(index, coefficient)` pairs; repeated indices are summed and
    /// anything above the cap is dropped.
    pub fn from_terms<I>(cap: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (MultiIndex3, Rational)>,
    {
        let mut out = Self::zero(cap);
        for (idx, c) in terms {
            out.accumulate(idx, &c);
        }
        out
    }

    fn insert(&mut self, idx: MultiIndex3, c: Rational) {
        if idx.total() <= self.cap && !c.is_zero() {
            self.coeffs.insert(idx, c);
        }
    }

    fn accumulate(&mut self, idx: MultiIndex3, c: &Rational) {
        if idx.total() > self.cap || c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&idx) {
            Some(slot) => {
                *slot = &*slot + c;
                if slot.is_zero() {
                    self.coeffs.remove(&idx);
                }
            }
            None => {
                self.coeffs.insert(idx, c.clone());
            }
        }
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn coeff(&self, idx: MultiIndex3) -> Rational {
        self.coeffs.get(&idx).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex3, &Rational)> {
        self.coeffs.iter()
    }

    /// Number of stored (nonzero) coefficients.
    pub fn nnz(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn same_cap(&self, other: &Self) -> Result<()> {
        if self.cap == other.cap {
            Ok(())
        } else {
            Err(Error::CapMismatch(self.cap, other.cap))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_cap(other)?;
        let mut out = self.clone();
        for (idx, c) in &other.coeffs {
            out.accumulate(*idx, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero(self.cap);
        }
        Self {
            cap: self.cap,
            coeffs: self.coeffs.iter().map(|(i, c)| (*i, c * k)).collect(),
        }
    }

    /// Cauchy product, truncated to the common cap.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_cap(other)?;
        let mut out = Self::zero(self.cap);
        for (i, a) in &self.coeffs {
            let budget = self.cap - i.total();
            for (j, b) in other.coeffs.range(..=MultiIndex3::new(0, 0, budget)) {
                debug_assert!(j.total() <= budget);
                out.accumulate(*i + *j, &(a * b));
            }
        }
        Ok(out)
    }

    /// Multiplies by `x^m y^n z^p`, dropping terms pushed over the cap.
    pub fn shift(&self, by: MultiIndex3) -> Self {
        let mut out = Self::zero(self.cap);
        for (i, c) in &self.coeffs {
            out.insert(*i + by, c.clone());
        }
        out
    }

    /// Same coefficients under a different cap (lower caps truncate).
    pub fn with_cap(&self, cap: u32) -> Self {
        Self {
            cap,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(i, _)| i.total() <= cap)
                .map(|(i, c)| (*i, c.clone()))
                .collect(),
        }
    }

    /// Rewrites every coefficient through `f`, which also sees the index.
    pub fn map_coeffs<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(MultiIndex3, &Rational) -> Result<Rational>,
    {
        let mut out = Self::zero(self.cap);
        for (i, c) in &self.coeffs {
            out.insert(*i, f(*i, c)?);
        }
        Ok(out)
    }

    /// Reinterprets the native slots `(m, n, p)` as the variables `slots[0..3]`.
    ///
    /// Slots mapped to the same axis add their exponents, so `[X, Y, Y]` is
    /// the substitution `z -> y`.
    pub fn embed(&self, slots: [Axis; 3]) -> Self {
        let mut out = Self::zero(self.cap);
        for (i, c) in &self.coeffs {
            let mut j = MultiIndex3::ZERO;
            for (k, e) in i.as_array().into_iter().enumerate() {
                *j.get_mut(slots[k]) += e;
            }
            out.accumulate(j, c);
        }
        out
    }

    /// First graded-lex index where the series differ, with both coefficients.
    pub fn first_difference(&self, other: &Self) -> Option<(MultiIndex3, Rational, Rational)> {
        let cap = self.cap.min(other.cap);
        let mut keys: Vec<MultiIndex3> = self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .filter(|i| i.total() <= cap)
            .copied()
            .collect();
        keys.sort();
        keys.dedup();
        keys.into_iter().find_map(|i| {
            let (a, b) = (self.coeff(i), other.coeff(i));
            (a != b).then_some((i, a, b))
        })
    }

    /// Floating-point value of the truncated polynomial.
    pub fn eval_f64(&self, point: [f64; 3]) -> f64 {
        let mut acc = CompensatedSum::new();
        for (i, c) in &self.coeffs {
            acc.add(c.to_f64() * point[0].powi(i.m as i32) * point[1].powi(i.n as i32) * point[2].powi(i.p as i32));
        }
        acc.value()
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSeries[cap {}] ", self.cap)?;
        f.debug_map().entries(self.coeffs.iter().map(|(i, c)| (i.to_string(), c))).finish()
    }
}

/// `(1 + sign*v)^exponent` in the variable `axis`.
///
/// The coefficient of `v^k` is `(-exponent)_k / k! * (-sign)^k`; for
/// `(1 - v)^(-e)` this is `(e)_k / k!`.
pub fn binomial_series(exponent: &Rational, axis: Axis, sign: i8, cap: u32) -> TruncatedSeries {
    debug_assert!(sign == 1 || sign == -1);
    let neg_e = -exponent;
    let mut out = TruncatedSeries::zero(cap);
    for k in 0..=cap {
        let mut c = pochhammer(&neg_e, k)
            .checked_div(&factorial(k))
            .expect("factorial is nonzero");
        if sign > 0 && k % 2 == 1 {
            c = -c;
        }
        let mut idx = MultiIndex3::ZERO;
        *idx.get_mut(axis) = k;
        out.insert(idx, c);
    }
    out
}
