//! The hypergeometric functions used throughout: Gauss, confluent, Appell,
//! Humbert, Lauricella and Srivastava's triple series.
//!
//! Every function here has the same shape: a product of Pochhammer symbols
//! whose lengths are sums of a subset of the summation indices, divided by
//! `m! n! p!`. [`Shape`] records those couplings once and both the exact
//! generators and the float evaluator walk it.

mod eval;
mod params;
mod shape;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use eval::{eval, eval_values, EvalOptions, EvalResult, EvalStatus};
pub use params::{Param, ParamSet};
pub use shape::{coeff, coeff_values, truncated, truncated_values, Shape};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FunctionId {
    Gauss2F1,
    Hyp0F1,
    Hyp1F1,
    /// `(1 - v)^(-a)`, the binomial series.
    Hyp1F0,
    AppellF1,
    AppellF2,
    AppellF3,
    AppellF4,
    HumbertPsi2,
    /// Lauricella `F_D` in `r <= 3` variables.
    LauricellaFD(u8),
    HA,
    HB,
    HC,
}

impl FunctionId {
    pub const ALL: [FunctionId; 15] = [
        FunctionId::Gauss2F1,
        FunctionId::Hyp0F1,
        FunctionId::Hyp1F1,
        FunctionId::Hyp1F0,
        FunctionId::AppellF1,
        FunctionId::AppellF2,
        FunctionId::AppellF3,
        FunctionId::AppellF4,
        FunctionId::HumbertPsi2,
        FunctionId::LauricellaFD(1),
        FunctionId::LauricellaFD(2),
        FunctionId::LauricellaFD(3),
        FunctionId::HA,
        FunctionId::HB,
        FunctionId::HC,
    ];

    /// Number of variables.
    pub fn arity(self) -> usize {
        use FunctionId::*;
        match self {
            Gauss2F1 | Hyp0F1 | Hyp1F1 | Hyp1F0 => 1,
            AppellF1 | AppellF2 | AppellF3 | AppellF4 | HumbertPsi2 => 2,
            LauricellaFD(r) => r as usize,
            HA | HB | HC => 3,
        }
    }

    /// Parameter names in positional order.
    pub fn params(self) -> Vec<Param> {
        use FunctionId::*;
        use Param::*;
        match self {
            Gauss2F1 => vec![A, B, C],
            Hyp0F1 => vec![C],
            Hyp1F1 => vec![A, C],
            Hyp1F0 => vec![A],
            AppellF1 => vec![A, B1, B2, C],
            AppellF2 => vec![A, B1, B2, C1, C2],
            AppellF3 => vec![A1, A2, B1, B2, C],
            AppellF4 => vec![A, B, C1, C2],
            HumbertPsi2 => vec![A, C1, C2],
            LauricellaFD(r) => {
                let mut v = vec![A];
                v.extend([B1, B2, B3].into_iter().take(r as usize));
                v.push(C);
                v
            }
            HA => vec![Alpha, Beta1, Beta2, Gamma1, Gamma2],
            HB => vec![Alpha, Beta1, Beta2, Gamma1, Gamma2, Gamma3],
            HC => vec![Alpha, Beta1, Beta2, Gamma],
        }
    }

    pub fn name(self) -> String {
        use FunctionId::*;
        match self {
            Gauss2F1 => "2F1".into(),
            Hyp0F1 => "0F1".into(),
            Hyp1F1 => "1F1".into(),
            Hyp1F0 => "1F0".into(),
            AppellF1 => "F1".into(),
            AppellF2 => "F2".into(),
            AppellF3 => "F3".into(),
            AppellF4 => "F4".into(),
            HumbertPsi2 => "Psi2".into(),
            LauricellaFD(r) => format!("FD{r}"),
            HA => "HA".into(),
            HB => "HB".into(),
            HC => "HC".into(),
        }
    }

    /// Picks this function's parameters out of a named set, in positional order.
    pub fn bind<T: Clone>(self, params: &ParamSet<T>) -> Result<Vec<T>> {
        self.params().into_iter().map(|p| params.get(p).cloned()).collect()
    }

    /// Builds a named set from positional values.
    pub fn named<T: Clone>(self, values: &[T]) -> Result<ParamSet<T>> {
        let names = self.params();
        if names.len() != values.len() {
            return Err(Error::ArityMismatch(format!(
                "{} takes {} parameters, got {}",
                self.name(),
                names.len(),
                values.len()
            )));
        }
        Ok(names.into_iter().zip(values.iter().cloned()).collect())
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for FunctionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use FunctionId::*;
        let id = match s.trim().to_ascii_lowercase().as_str() {
            "2f1" | "f" | "gauss2f1" | "gauss" => Gauss2F1,
            "0f1" | "hyp0f1" => Hyp0F1,
            "1f1" | "hyp1f1" => Hyp1F1,
            "1f0" | "hyp1f0" | "binom" => Hyp1F0,
            "f1" | "appellf1" => AppellF1,
            "f2" | "appellf2" => AppellF2,
            "f3" | "appellf3" => AppellF3,
            "f4" | "appellf4" => AppellF4,
            "psi2" | "humbertpsi2" => HumbertPsi2,
            "fd1" => LauricellaFD(1),
            "fd2" => LauricellaFD(2),
            "fd3" => LauricellaFD(3),
            "ha" => HA,
            "hb" => HB,
            "hc" => HC,
            _ => return Err(Error::Parse(format!("unknown function `{s}`"))),
        };
        Ok(id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for f in FunctionId::ALL {
            assert_eq!(f.name().parse::<FunctionId>().unwrap(), f);
            assert!(f.arity() >= 1 && f.arity() <= 3);
        }
        assert!("H_D".parse::<FunctionId>().is_err());
    }

    #[test]
    fn named_checks_length() {
        assert!(FunctionId::HA.named(&[1.0, 2.0]).is_err());
        let ps = FunctionId::Gauss2F1.named(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(FunctionId::Gauss2F1.bind(&ps).unwrap(), vec![1.0, 2.0, 3.0]);
    }
}
