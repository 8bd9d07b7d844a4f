use std::collections::HashMap;

use super::{FunctionId, ParamSet};
use crate::error::{Error, Result};
use crate::kernel::{factorial, pochhammer, MultiIndex3, Rational, TruncatedSeries};

type Mask = [u32; 3];

const X: Mask = [1, 0, 0];
const Y: Mask = [0, 1, 0];
const Z: Mask = [0, 0, 1];
const XY: Mask = [1, 1, 0];
const XZ: Mask = [1, 0, 1];
const YZ: Mask = [0, 1, 1];
const XYZ: Mask = [1, 1, 1];

/// Pochhammer couplings of one function: `(a)_{mask . idx}` in the numerator
/// for each `(a, mask)` in `num`, likewise for `den`, over `m! n! p!`.
#[derive(Debug, Clone)]
pub struct Shape<T> {
    pub arity: usize,
    pub num: Vec<(T, Mask)>,
    pub den: Vec<(T, Mask)>,
}

fn dot(mask: &Mask, idx: &MultiIndex3) -> u32 {
    mask[0] * idx.m + mask[1] * idx.n + mask[2] * idx.p
}

impl<T: Clone> Shape<T> {
    pub fn new(f: FunctionId, values: &[T]) -> Result<Self> {
        use FunctionId::*;
        let expected = f.params().len();
        if values.len() != expected {
            return Err(Error::ArityMismatch(format!(
                "{f} takes {expected} parameters, got {}",
                values.len()
            )));
        }
        let v = |i: usize| values[i].clone();
        let (num, den) = match f {
            Gauss2F1 => (vec![(v(0), X), (v(1), X)], vec![(v(2), X)]),
            Hyp0F1 => (vec![], vec![(v(0), X)]),
            Hyp1F1 => (vec![(v(0), X)], vec![(v(1), X)]),
            Hyp1F0 => (vec![(v(0), X)], vec![]),
            AppellF1 => (vec![(v(0), XY), (v(1), X), (v(2), Y)], vec![(v(3), XY)]),
            AppellF2 => (vec![(v(0), XY), (v(1), X), (v(2), Y)], vec![(v(3), X), (v(4), Y)]),
            AppellF3 => (
                vec![(v(0), X), (v(1), Y), (v(2), X), (v(3), Y)],
                vec![(v(4), XY)],
            ),
            AppellF4 => (vec![(v(0), XY), (v(1), XY)], vec![(v(2), X), (v(3), Y)]),
            HumbertPsi2 => (vec![(v(0), XY)], vec![(v(1), X), (v(2), Y)]),
            LauricellaFD(r) => {
                let r = r as usize;
                if !(1..=3).contains(&r) {
                    return Err(Error::ArityMismatch(format!("F_D supports 1 to 3 variables, got {r}")));
                }
                let all: Mask = [1, (r > 1) as u32, (r > 2) as u32];
                let mut num = vec![(v(0), all)];
                for (k, unit) in [X, Y, Z].into_iter().take(r).enumerate() {
                    num.push((v(k + 1), unit));
                }
                (num, vec![(v(r + 1), all)])
            }
            HA => (
                vec![(v(0), XZ), (v(1), XY), (v(2), YZ)],
                vec![(v(3), X), (v(4), YZ)],
            ),
            HB => (
                vec![(v(0), XZ), (v(1), XY), (v(2), YZ)],
                vec![(v(3), X), (v(4), Y), (v(5), Z)],
            ),
            HC => (vec![(v(0), XZ), (v(1), XY), (v(2), YZ)], vec![(v(3), XYZ)]),
        };
        Ok(Self { arity: f.arity(), num, den })
    }

    /// Whether `idx` only uses this function's variables.
    pub fn admits(&self, idx: &MultiIndex3) -> bool {
        idx.as_array()[self.arity..].iter().all(|&e| e == 0)
    }
}

impl Shape<Rational> {
    fn den_check(&self, idx: &MultiIndex3) -> Result<()> {
        for (b, mask) in &self.den {
            let len = dot(mask, idx);
            if len > 0 && pochhammer(b, len).is_zero() {
                return Err(Error::BadParams(format!(
                    "denominator parameter {b} is a nonpositive integer within depth {len}"
                )));
            }
        }
        Ok(())
    }

    /// Direct Pochhammer formula for one coefficient.
    pub fn coeff(&self, idx: MultiIndex3) -> Result<Rational> {
        if !self.admits(&idx) {
            return Err(Error::ArityMismatch(format!(
                "index {idx} uses a variable beyond arity {}",
                self.arity
            )));
        }
        self.den_check(&idx)?;
        let mut c = Rational::one();
        for (a, mask) in &self.num {
            c = c * pochhammer(a, dot(mask, &idx));
            if c.is_zero() {
                return Ok(c);
            }
        }
        let mut d = factorial(idx.m) * factorial(idx.n) * factorial(idx.p);
        for (b, mask) in &self.den {
            d = d * pochhammer(b, dot(mask, &idx));
        }
        c.checked_div(&d)
    }

    /// Step ratio `c(prev + e_axis) / c(prev)` without the variable.
    fn ratio(&self, prev: &MultiIndex3, axis: usize) -> Result<Rational> {
        let mut num = Rational::one();
        for (a, mask) in &self.num {
            if mask[axis] == 1 {
                num = num * (a + Rational::from(dot(mask, prev)));
            }
        }
        let mut den = Rational::from(prev.as_array()[axis] + 1);
        for (b, mask) in &self.den {
            if mask[axis] == 1 {
                let f = b + Rational::from(dot(mask, prev));
                if f.is_zero() {
                    return Err(Error::BadParams(format!(
                        "denominator parameter {b} is a nonpositive integer within depth {}",
                        dot(mask, prev) + 1
                    )));
                }
                den = den * f;
            }
        }
        num.checked_div(&den)
    }

    /// All coefficients up to total degree `cap`, by the step recurrence.
    pub fn truncated(&self, cap: u32) -> Result<TruncatedSeries> {
        let mut table: HashMap<MultiIndex3, Rational> = HashMap::new();
        let mut terms = Vec::new();
        for idx in MultiIndex3::graded(cap).filter(|i| self.admits(i)) {
            let c = if idx == MultiIndex3::ZERO {
                Rational::one()
            } else {
                let arr = idx.as_array();
                let axis = (0..3).find(|&k| arr[k] > 0).expect("nonzero index");
                let mut prev_arr = arr;
                prev_arr[axis] -= 1;
                let prev = MultiIndex3::from(prev_arr);
                let r = self.ratio(&prev, axis)?;
                &table[&prev] * r
            };
            table.insert(idx, c.clone());
            terms.push((idx, c));
        }
        Ok(TruncatedSeries::from_terms(cap, terms))
    }
}

/// Exact coefficient of `x^m y^n z^p`, from positional parameters.
pub fn coeff_values(f: FunctionId, values: &[Rational], idx: MultiIndex3) -> Result<Rational> {
    Shape::new(f, values)?.coeff(idx)
}

/// Exact coefficient of `x^m y^n z^p`. Variables beyond the function's arity
/// must have exponent zero.
pub fn coeff(f: FunctionId, params: &ParamSet<Rational>, idx: MultiIndex3) -> Result<Rational> {
    coeff_values(f, &f.bind(params)?, idx)
}

pub fn truncated_values(f: FunctionId, values: &[Rational], cap: u32) -> Result<TruncatedSeries> {
    Shape::new(f, values)?.truncated(cap)
}

/// The series of `f` truncated at total degree `cap`, in its native variables
/// (`x`, then `y`, then `z`).
pub fn truncated(f: FunctionId, params: &ParamSet<Rational>, cap: u32) -> Result<TruncatedSeries> {
    truncated_values(f, &f.bind(params)?, cap)
}
