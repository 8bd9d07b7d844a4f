//! Expansion formulas: a hard function written as a multi-indexed sum of
//! products of simpler functions with shifted parameters.

use rayon::prelude::*;

use crate::catalog::{eval_values, EvalOptions, EvalResult, EvalStatus, ParamSet};
use crate::compensated::CompensatedSum;
use crate::error::{Error, Result};
use crate::kernel::{factorial, MultiIndex3, Rational, TruncatedSeries};
use crate::notation::{FnCall, LinExpr, PochFactor};
use crate::operators::identity::as_singular;
use crate::operators::Verdict;
use crate::registry::registry;

/// The summand of a decomposition at one outer index tuple `t`:
/// `(-1)^sign * numer / (denom * prod t_k!) * x^a y^b z^c * prod rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub sign: Option<LinExpr>,
    pub numer: Vec<PochFactor>,
    pub denom: Vec<PochFactor>,
    pub monomial: [LinExpr; 3],
    pub rhs: Vec<FnCall>,
    pub text: String,
}

impl Term {
    /// Degree each outer index adds to the monomial shift.
    fn weights(&self, n: usize) -> Result<Vec<u32>> {
        let mut w = vec![0u32; n];
        for e in &self.monomial {
            if !e.is_index_only() || !e.constant.is_zero() {
                return Err(Error::BadConfig("monomial exponents must be linear in the indices".into()));
            }
            for (k, c) in e.indices.iter().enumerate() {
                let c = u32::try_from(*c)
                    .map_err(|_| Error::BadConfig("monomial exponents need nonnegative coefficients".into()))?;
                w[k] += c;
            }
        }
        if let Some(k) = w.iter().position(|&c| c == 0) {
            return Err(Error::BadConfig(format!("index #{} does not raise the degree", k + 1)));
        }
        Ok(w)
    }

    fn shift(&self, t: &[u32]) -> Result<MultiIndex3> {
        let [a, b, c] = &self.monomial;
        Ok(MultiIndex3::new(a.eval_len(t)?, b.eval_len(t)?, c.eval_len(t)?))
    }

    fn is_negative(&self, t: &[u32]) -> bool {
        self.sign.as_ref().is_some_and(|s| s.eval_int(t).rem_euclid(2) == 1)
    }

    fn prefactor_exact(&self, ps: &ParamSet<Rational>, t: &[u32]) -> Result<Rational> {
        let mut num = Rational::one();
        for f in &self.numer {
            num = num * f.eval_exact(ps, t)?;
        }
        if num.is_zero() {
            return Ok(num);
        }
        let mut den: Rational = t.iter().map(|&k| factorial(k)).product();
        for f in &self.denom {
            den = den * f.eval_exact(ps, t)?;
        }
        let v = num
            .checked_div(&den)
            .map_err(|_| Error::SingularParameter(format!("a denominator factor vanishes at indices {t:?}")))?;
        Ok(if self.is_negative(t) { -v } else { v })
    }

    /// Value and the number of roundings that went into it.
    fn prefactor_f64(&self, ps: &ParamSet<f64>, t: &[u32]) -> Result<(f64, u32)> {
        let mut v = 1.0;
        let mut ops = 0u32;
        for f in &self.numer {
            v *= f.eval_f64(ps, t)?;
            ops += f.len.eval_len(t)? * f.power + 1;
        }
        let mut den = 1.0;
        for f in &self.denom {
            den *= f.eval_f64(ps, t)?;
            ops += f.len.eval_len(t)? * f.power + 1;
        }
        for &k in t {
            den *= (1..=k).map(f64::from).product::<f64>();
            ops += k;
        }
        if den == 0.0 {
            return Err(Error::SingularParameter(format!("a denominator factor vanishes at indices {t:?}")));
        }
        let v = v / den;
        Ok((if self.is_negative(t) { -v } else { v }, ops + 1))
    }
}

fn enumerate(weights: &[u32], budget: u32, exact: bool) -> Vec<Vec<u32>> {
    fn rec(w: &[u32], k: usize, left: u32, exact: bool, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == w.len() {
            if !exact || left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for v in 0..=left / w[k] {
            cur[k] = v;
            rec(w, k + 1, left - v * w[k], exact, cur, out);
        }
        cur[k] = 0;
    }
    let mut out = Vec::new();
    rec(weights, 0, budget, exact, &mut vec![0; weights.len()], &mut out);
    out
}

/// All tuples with weighted sum at most `budget`.
fn tuples_within(weights: &[u32], budget: u32) -> Vec<Vec<u32>> {
    enumerate(weights, budget, false)
}

/// All tuples with weighted sum exactly `d`.
fn tuples_at(weights: &[u32], d: u32) -> Vec<Vec<u32>> {
    enumerate(weights, d, true)
}

#[derive(Debug, Clone)]
pub struct DecompositionEntry {
    pub id: String,
    pub lhs: FnCall,
    pub lhs_text: String,
    pub indices: Vec<String>,
    pub term: Term,
    /// A repaired variant with a note on what changed.
    pub corrected: Option<(String, Term)>,
    weights: Vec<u32>,
    corrected_weights: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompOptions {
    pub outer_cap: u32,
    pub tol: f64,
}

impl Default for DecompOptions {
    fn default() -> Self {
        Self { outer_cap: 60, tol: 1e-10 }
    }
}

impl DecompositionEntry {
    pub fn new(
        id: String,
        lhs: FnCall,
        lhs_text: String,
        indices: Vec<String>,
        term: Term,
        corrected: Option<(String, Term)>,
    ) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::BadConfig("a decomposition needs at least one index".into()));
        }
        let weights = term.weights(indices.len())?;
        let corrected_weights = match &corrected {
            Some((_, t)) => t.weights(indices.len())?,
            None => Vec::new(),
        };
        Ok(Self { id, lhs, lhs_text, indices, term, corrected, weights, corrected_weights })
    }

    /// Minimal degree each outer index adds.
    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// Number of coordinates in a point for this entry: `(x, y)` when only
    /// `x` and `y` occur, `(x, y, z)` otherwise.
    pub fn point_len(&self) -> usize {
        self.lhs.vars.iter().map(|a| a.position() + 1).max().unwrap_or(1)
    }

    fn xyz(&self, point: &[f64]) -> Result<[f64; 3]> {
        if point.len() != self.point_len() {
            return Err(Error::ArityMismatch(format!(
                "{} takes a point with {} coordinates, got {}",
                self.id,
                self.point_len(),
                point.len()
            )));
        }
        let mut xyz = [0.0; 3];
        xyz[..point.len()].copy_from_slice(point);
        Ok(xyz)
    }

    fn pick(&self, corrected: bool) -> Result<(&Term, &[u32])> {
        if corrected {
            match &self.corrected {
                Some((_, t)) => Ok((t, &self.corrected_weights)),
                None => Err(Error::UnknownIdentity(format!("{} has no corrected variant", self.id))),
            }
        } else {
            Ok((&self.term, &self.weights))
        }
    }

    pub fn lhs_series(&self, ps: &ParamSet<Rational>, degree: u32) -> Result<TruncatedSeries> {
        self.lhs.series(ps, &[], degree).map_err(as_singular)
    }

    pub fn rhs_series(&self, ps: &ParamSet<Rational>, degree: u32, corrected: bool) -> Result<TruncatedSeries> {
        let (term, weights) = self.pick(corrected)?;
        let mut acc = Vec::new();
        for t in tuples_within(weights, degree) {
            let pref = term.prefactor_exact(ps, &t).map_err(as_singular)?;
            if pref.is_zero() {
                continue;
            }
            let shift = term.shift(&t)?;
            let residual = degree - shift.total();
            let mut inner = TruncatedSeries::constant(pref, residual);
            for call in &term.rhs {
                inner = inner.mul(&call.series(ps, &t, residual).map_err(as_singular)?)?;
            }
            acc.extend(inner.terms().map(|(j, c)| (*j + shift, c.clone())));
        }
        Ok(TruncatedSeries::from_terms(degree, acc))
    }

    pub fn verify(&self, ps: &ParamSet<Rational>, degree: u32) -> Result<Verdict> {
        let lhs = self.lhs_series(ps, degree)?;
        Ok(Verdict::compare(&lhs, &self.rhs_series(ps, degree, false)?, degree))
    }

    pub fn verify_corrected(&self, ps: &ParamSet<Rational>, degree: u32) -> Result<Verdict> {
        let lhs = self.lhs_series(ps, degree)?;
        Ok(Verdict::compare(&lhs, &self.rhs_series(ps, degree, true)?, degree))
    }

    /// Direct series evaluation of the left-hand side.
    pub fn eval_lhs(&self, ps: &ParamSet<f64>, point: &[f64], opts: EvalOptions) -> Result<EvalResult> {
        let xyz = self.xyz(point)?;
        eval_values(self.lhs.f, &self.lhs.values_f64(ps, &[])?, &self.lhs.point(xyz), opts)
    }

    /// Sums the right-hand side numerically, shell by shell in the degree of
    /// the monomial shift.
    pub fn eval(&self, ps: &ParamSet<f64>, point: &[f64], opts: DecompOptions) -> Result<EvalResult> {
        self.eval_term(ps, point, opts, false)
    }

    pub fn eval_corrected(&self, ps: &ParamSet<f64>, point: &[f64], opts: DecompOptions) -> Result<EvalResult> {
        self.eval_term(ps, point, opts, true)
    }

    fn eval_term(&self, ps: &ParamSet<f64>, point: &[f64], opts: DecompOptions, corrected: bool) -> Result<EvalResult> {
        if !(opts.tol.is_finite() && opts.tol > 0.0) {
            return Err(Error::BadParams(format!("tolerance must be positive, got {}", opts.tol)));
        }
        let (term, weights) = self.pick(corrected)?;
        let xyz = self.xyz(point)?;
        if xyz.iter().chain(ps.iter().map(|(_, v)| v)).any(|v| !v.is_finite()) {
            return Err(Error::BadParams("parameters and point must be finite".into()));
        }
        let inner_opts = EvalOptions { tol: (opts.tol * 1e-3).max(1e-15), max_shells: 400 };

        let mut total = CompensatedSum::new();
        let mut abs_total = 0.0f64;
        let mut inner_err = 0.0f64;
        let mut small_run = 0u32;
        let mut prev_abs = f64::NAN;
        let mut shell_abs = 0.0f64;
        let mut inner_capped = false;
        let mut shells = 0u32;

        for d in 0..=opts.outer_cap {
            let tuples = tuples_at(weights, d);
            if tuples.is_empty() {
                continue;
            }
            shells += 1;
            let terms: Vec<Result<(f64, f64, bool)>> =
                tuples.par_iter().map(|t| self.float_term(term, ps, xyz, t, inner_opts)).collect();
            shell_abs = 0.0;
            for r in terms {
                let (v, err, capped) = r?;
                total.add(v);
                shell_abs += v.abs();
                inner_err += err;
                inner_capped |= capped;
            }
            abs_total += shell_abs;
            let value = total.value();
            if !value.is_finite() || !abs_total.is_finite() {
                return Err(Error::NonFinite);
            }
            if shell_abs < opts.tol * value.abs().max(1.0) {
                small_run += 1;
            } else {
                small_run = 0;
            }
            if small_run >= 3 {
                let ratio = shell_abs / prev_abs;
                let tail = if shell_abs == 0.0 {
                    0.0
                } else if ratio < 1.0 {
                    shell_abs * ratio / (1.0 - ratio)
                } else {
                    shell_abs
                };
                return Ok(EvalResult {
                    value,
                    abs_error_estimate: tail + inner_err + 2.0 * f64::EPSILON * abs_total,
                    shells_summed: shells,
                    status: if inner_capped { EvalStatus::MaxShellsReached } else { EvalStatus::Converged },
                });
            }
            prev_abs = shell_abs;
        }
        Ok(EvalResult {
            value: total.value(),
            abs_error_estimate: shell_abs + inner_err + 2.0 * f64::EPSILON * abs_total,
            shells_summed: shells,
            status: EvalStatus::MaxShellsReached,
        })
    }

    /// One summand with its error bound and whether an inner sum hit its cap.
    fn float_term(
        &self,
        term: &Term,
        ps: &ParamSet<f64>,
        xyz: [f64; 3],
        t: &[u32],
        inner_opts: EvalOptions,
    ) -> Result<(f64, f64, bool)> {
        let shift = term.shift(t)?.as_array();
        let mono: f64 = (0..3).map(|k| xyz[k].powi(shift[k] as i32)).product();
        if mono == 0.0 {
            return Ok((0.0, 0.0, false));
        }
        let (pref, ops) = term.prefactor_f64(ps, t)?;
        if pref == 0.0 {
            return Ok((0.0, 0.0, false));
        }
        let mut v = pref * mono;
        let mut rel = (ops + shift.iter().sum::<u32>()) as f64 * f64::EPSILON;
        let mut capped = false;
        for call in &term.rhs {
            let r = eval_values(call.f, &call.values_f64(ps, t)?, &call.point(xyz), inner_opts).map_err(as_singular)?;
            match r.status {
                EvalStatus::DivergenceSuspected => {
                    return Err(Error::DivergenceSuspected { shells: r.shells_summed });
                }
                EvalStatus::MaxShellsReached => capped = true,
                EvalStatus::Converged => {}
            }
            if r.value != 0.0 {
                rel += r.abs_error_estimate / r.value.abs();
            }
            v *= r.value;
        }
        Ok((v, v.abs() * rel, capped))
    }
}

/// Checks a registered decomposition coefficient by coefficient up to total
/// degree `degree`.
pub fn verify_decomposition(id: &str, params: &ParamSet<Rational>, degree: u32) -> Result<Verdict> {
    registry().decomposition(id)?.verify(params, degree)
}

/// Evaluates a registered decomposition by summing its right-hand side.
pub fn eval_via_decomposition(
    id: &str,
    params: &ParamSet<f64>,
    point: &[f64],
    outer_cap: u32,
    tol: f64,
) -> Result<EvalResult> {
    registry().decomposition(id)?.eval(params, point, DecompOptions { outer_cap, tol })
}
