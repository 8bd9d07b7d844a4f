use serde::{Deserialize, Serialize};

use super::{FunctionId, ParamSet, Shape};
use crate::compensated::CompensatedSum;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    pub tol: f64,
    pub max_shells: u32,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self { tol: 1e-12, max_shells: 400 }
    }
}

impl EvalOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EvalStatus {
    Converged,
    MaxShellsReached,
    DivergenceSuspected,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub shells_summed: u32,
    pub status: EvalStatus,
}

impl EvalResult {
    pub fn exact(value: f64) -> Self {
        Self { value, abs_error_estimate: 0.0, shells_summed: 1, status: EvalStatus::Converged }
    }

    pub fn converged(&self) -> bool {
        self.status == EvalStatus::Converged
    }
}

/// Sums the series of `f` at `point` shell by shell.
pub fn eval(f: FunctionId, params: &ParamSet<f64>, point: &[f64], opts: EvalOptions) -> Result<EvalResult> {
    eval_values(f, &f.bind(params)?, point, opts)
}

/// Like [`eval`] with positional parameters.
pub fn eval_values(f: FunctionId, values: &[f64], point: &[f64], opts: EvalOptions) -> Result<EvalResult> {
    if !(opts.tol.is_finite() && opts.tol > 0.0) {
        return Err(Error::BadParams(format!("tolerance must be positive, got {}", opts.tol)));
    }
    if point.len() != f.arity() {
        return Err(Error::ArityMismatch(format!(
            "{f} takes {} variables, got {}",
            f.arity(),
            point.len()
        )));
    }
    if values.iter().chain(point).any(|v| !v.is_finite()) {
        return Err(Error::BadParams("parameters and point must be finite".into()));
    }
    let shape = Shape::new(f, values)?;
    for (b, _) in &shape.den {
        if *b <= 0.0 && b.fract() == 0.0 {
            return Err(Error::BadParams(format!("denominator parameter {b} is a nonpositive integer")));
        }
    }
    sum_shells(&shape, point, opts)
}

type Mask = [u32; 3];

fn dot(mask: &Mask, u: &[u32; 3]) -> f64 {
    (mask[0] * u[0] + mask[1] * u[1] + mask[2] * u[2]) as f64
}

/// Position of local index `u` within its shell `s` for `d` active variables.
fn slot(u: &[u32; 3], s: u32, d: usize) -> usize {
    match d {
        1 => 0,
        2 => u[1] as usize,
        _ => (u[0] * (s + 1) + u[1]) as usize,
    }
}

fn shell_len(s: u32, d: usize) -> usize {
    match d {
        1 => 1,
        2 => s as usize + 1,
        _ => (s as usize + 1) * (s as usize + 1),
    }
}

fn sum_shells(shape: &Shape<f64>, point: &[f64], opts: EvalOptions) -> Result<EvalResult> {
    // Variables at zero contribute nothing beyond the constant term, so the
    // walk only runs over the active ones.
    let active: Vec<usize> = (0..shape.arity).filter(|&k| point[k] != 0.0).collect();
    if active.is_empty() {
        return Ok(EvalResult::exact(1.0));
    }
    let d = active.len();
    let localize = |mask: &Mask| {
        let mut out = [0u32; 3];
        for (j, &k) in active.iter().enumerate() {
            out[j] = mask[k];
        }
        out
    };
    let relevant = |list: &[(f64, Mask)]| -> Vec<(f64, Mask)> {
        list.iter().map(|(a, m)| (*a, localize(m))).filter(|(_, m)| *m != [0; 3]).collect()
    };
    let num = relevant(&shape.num);
    let den = relevant(&shape.den);
    let mut pt = [0.0; 3];
    for (j, &k) in active.iter().enumerate() {
        pt[j] = point[k];
    }

    // Coefficients decaying factorially along every axis cannot diverge.
    let entire = (0..d).all(|j| {
        let up = num.iter().filter(|(_, m)| m[j] == 1).count();
        let down = den.iter().filter(|(_, m)| m[j] == 1).count();
        up < down + 1
    });
    let largest = num.iter().chain(&den).map(|(a, _)| a.abs()).fold(0.0, f64::max);
    let warmup = 4 * largest.ceil().min(1e6) as u32 + 8;

    let mut prev = vec![1.0f64];
    let mut cur: Vec<f64> = Vec::new();
    let mut total = CompensatedSum::new();
    total.add(1.0);
    let mut abs_total = 1.0f64;
    let mut prev_abs = 1.0f64;
    let mut small_run = 0u32;
    let mut grow_run = 0u32;
    let mut tail = f64::INFINITY;
    let mut shell_abs = 1.0f64;
    // sum of |term| times the number of roundings that produced it
    let mut rounding = 0.0f64;
    let ops_per_step = (2 + num.len() + den.len()) as f64;

    for s in 1..=opts.max_shells {
        cur.clear();
        cur.resize(shell_len(s, d), 0.0);
        shell_abs = 0.0;

        let mut visit = |u: [u32; 3]| {
            let axis = (0..3).find(|&j| u[j] > 0).expect("shell index is nonzero");
            let mut back = u;
            back[axis] -= 1;
            let before = prev[slot(&back, s - 1, d)];
            let t = if before == 0.0 {
                0.0
            } else {
                let mut r = pt[axis] / (back[axis] + 1) as f64;
                for (a, m) in &num {
                    if m[axis] == 1 {
                        r *= a + dot(m, &back);
                    }
                }
                for (b, m) in &den {
                    if m[axis] == 1 {
                        r /= b + dot(m, &back);
                    }
                }
                before * r
            };
            cur[slot(&u, s, d)] = t;
            total.add(t);
            shell_abs += t.abs();
        };
        match d {
            1 => visit([s, 0, 0]),
            2 => (0..=s).rev().for_each(|a| visit([a, s - a, 0])),
            _ => {
                for a in (0..=s).rev() {
                    for b in (0..=s - a).rev() {
                        visit([a, b, s - a - b]);
                    }
                }
            }
        }
        std::mem::swap(&mut prev, &mut cur);
        abs_total += shell_abs;
        rounding += shell_abs * s as f64 * ops_per_step;

        let value = total.value();
        if !value.is_finite() || !abs_total.is_finite() {
            return Err(Error::NonFinite);
        }

        let ratio = if prev_abs > 0.0 { shell_abs / prev_abs } else { 0.0 };
        tail = if shell_abs == 0.0 {
            0.0
        } else if ratio < 1.0 {
            shell_abs * ratio / (1.0 - ratio)
        } else {
            f64::INFINITY
        };

        if shell_abs < opts.tol * value.abs().max(1.0) {
            small_run += 1;
        } else {
            small_run = 0;
        }
        let estimate = tail + f64::EPSILON * (2.0 * abs_total + rounding);
        if small_run >= 3 && estimate <= opts.tol * value.abs().max(1.0) {
            return Ok(EvalResult {
                value,
                abs_error_estimate: estimate,
                shells_summed: s + 1,
                status: EvalStatus::Converged,
            });
        }

        if !entire && s > warmup {
            if shell_abs > prev_abs {
                grow_run += 1;
            } else {
                grow_run = 0;
            }
            if grow_run >= 5 {
                return Ok(EvalResult {
                    value,
                    abs_error_estimate: shell_abs,
                    shells_summed: s + 1,
                    status: EvalStatus::DivergenceSuspected,
                });
            }
        }
        prev_abs = shell_abs;
    }

    let estimate = if tail.is_finite() { tail } else { shell_abs };
    Ok(EvalResult {
        value: total.value(),
        abs_error_estimate: estimate + f64::EPSILON * (2.0 * abs_total + rounding),
        shells_summed: opts.max_shells + 1,
        status: EvalStatus::MaxShellsReached,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(f: FunctionId, v: &[f64], pt: &[f64]) -> EvalResult {
        eval_values(f, v, pt, EvalOptions::default()).unwrap()
    }

    #[test]
    fn origin_is_one() {
        let r = ev(FunctionId::Gauss2F1, &[0.3, -2.5, 1.7], &[0.0]);
        assert_eq!(r.value, 1.0);
        assert_eq!(r.status, EvalStatus::Converged);
        assert_eq!(r.shells_summed, 1);
    }

    #[test]
    fn log_oracle() {
        let r = ev(FunctionId::Gauss2F1, &[1.0, 1.0, 2.0], &[0.5]);
        let oracle = -(1.0f64 - 0.5).ln() / 0.5;
        assert!(r.converged());
        let err = (r.value - oracle).abs();
        assert!(err <= 1e-12, "{}", r.value);
        assert!(err <= r.abs_error_estimate);
        assert!(r.abs_error_estimate <= 1e-12 * r.value.abs());
    }

    #[test]
    fn exponential_and_binomial() {
        let e = ev(FunctionId::Hyp1F1, &[1.0, 1.0], &[1.5]);
        assert!((e.value - 1.5f64.exp()).abs() < 1e-12);
        let b = ev(FunctionId::Hyp1F0, &[2.5], &[0.3]);
        assert!((b.value - 0.7f64.powf(-2.5)).abs() < 1e-12);
        // 0F1(1/2; x^2/4) = cosh(x)
        let c = ev(FunctionId::Hyp0F1, &[0.5], &[0.25]);
        assert!((c.value - 1.0f64.cosh()).abs() < 1e-13);
    }

    #[test]
    fn terminating_series() {
        // 2F1(-2, b; c; x) is a quadratic
        let (b, c, x) = (1.5, 2.5, 0.7);
        let r = ev(FunctionId::Gauss2F1, &[-2.0, b, c], &[x]);
        let poly = 1.0 - 2.0 * b / c * x + b * (b + 1.0) / (c * (c + 1.0)) * x * x;
        assert!((r.value - poly).abs() < 1e-15);
        assert!(r.converged());
    }

    #[test]
    fn divergence_is_flagged() {
        let r = ev(FunctionId::Gauss2F1, &[1.0, 1.0, 2.0], &[1.5]);
        assert_eq!(r.status, EvalStatus::DivergenceSuspected);
        let r = ev(FunctionId::HA, &[0.5, 0.5, 0.5, 1.5, 1.5], &[1.2, 1.1, 1.3]);
        assert_eq!(r.status, EvalStatus::DivergenceSuspected);
    }

    #[test]
    fn slow_series_hits_the_shell_cap() {
        let r = eval_values(
            FunctionId::Gauss2F1,
            &[1.0, 1.0, 2.0],
            &[0.999],
            EvalOptions { tol: 1e-12, max_shells: 50 },
        )
        .unwrap();
        assert_eq!(r.status, EvalStatus::MaxShellsReached);
    }

    #[test]
    fn rejects_bad_inputs() {
        let o = EvalOptions::default();
        assert!(matches!(eval_values(FunctionId::Gauss2F1, &[1.0, 1.0, -2.0], &[0.1], o), Err(Error::BadParams(_))));
        assert!(matches!(eval_values(FunctionId::HA, &[1.0; 5], &[0.1, 0.1], o), Err(Error::ArityMismatch(_))));
        let zero_tol = EvalOptions { tol: 0.0, ..o };
        assert!(eval_values(FunctionId::Gauss2F1, &[1.0, 1.0, 2.0], &[0.1], zero_tol).is_err());
    }

    #[test]
    fn ha_slice_is_gauss() {
        let v = [0.5, 0.33, 0.25, 2.5, 2.33];
        let h = ev(FunctionId::HA, &v, &[0.3, 0.0, 0.0]);
        let g = ev(FunctionId::Gauss2F1, &[0.5, 0.33, 2.5], &[0.3]);
        assert!((h.value - g.value).abs() <= 1e-14);
    }

    #[test]
    fn appell_f1_reduces_to_gauss_on_the_diagonal() {
        // F1(a; b1, b2; c; x, x) = 2F1(a, b1 + b2; c; x)
        let f1 = ev(FunctionId::AppellF1, &[0.7, 0.4, 0.9, 2.2], &[0.35, 0.35]);
        let g = ev(FunctionId::Gauss2F1, &[0.7, 1.3, 2.2], &[0.35]);
        assert!((f1.value - g.value).abs() < 1e-13);
    }
}
