//! Inverse pairs of symbolic operators acting diagonally on monomials.
//!
//! With `delta_j = x_j d/dx_j`, every operator here is a ratio of Gamma
//! functions of the Euler operators, so on `x^m y^n z^p` it multiplies by a
//! ratio of Pochhammer symbols. The infinite operator series are kept in
//! [`summation`] as terminating cross-checks.

pub(crate) mod identity;
pub mod summation;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use identity::{verify_operator_identity, IdentityEntry, IdentityFix, Verdict};

use crate::error::{Error, Result};
use crate::kernel::{pochhammer, Axis, MultiIndex3, Rational, TruncatedSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OpKind {
    Nabla(Axis, Axis),
    Delta(Axis, Axis),
    /// Lead axis against the sum of the other two.
    NablaTilde(Axis),
    DeltaTilde(Axis),
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpKind::Nabla(a, b) => write!(f, "nabla_{a}{b}"),
            OpKind::Delta(a, b) => write!(f, "delta_{a}{b}"),
            OpKind::NablaTilde(a) => write!(f, "nablatilde_{a}"),
            OpKind::DeltaTilde(a) => write!(f, "deltatilde_{a}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalOp {
    pub kind: OpKind,
    pub h: Rational,
}

/// `(h)_total / ((h)_a (h)_b)`.
fn pochhammer_ratio(h: &Rational, total: u32, a: u32, b: u32) -> Result<Rational> {
    let den = pochhammer(h, a) * pochhammer(h, b);
    pochhammer(h, total).checked_div(&den).map_err(|_| {
        Error::SingularParameter(format!("h = {h} gives a vanishing Pochhammer at depth {}", a.max(b)))
    })
}

impl DiagonalOp {
    pub fn new(kind: OpKind, h: Rational) -> Result<Self> {
        if let OpKind::Nabla(a, b) | OpKind::Delta(a, b) = kind {
            if a == b {
                return Err(Error::Parse(format!("{kind} needs two distinct axes")));
            }
        }
        Ok(Self { kind, h })
    }

    pub fn nabla(a: Axis, b: Axis, h: Rational) -> Self {
        Self::new(OpKind::Nabla(a, b), h).expect("distinct axes")
    }

    pub fn delta(a: Axis, b: Axis, h: Rational) -> Self {
        Self::new(OpKind::Delta(a, b), h).expect("distinct axes")
    }

    pub fn nabla_tilde(lead: Axis, h: Rational) -> Self {
        Self { kind: OpKind::NablaTilde(lead), h }
    }

    pub fn delta_tilde(lead: Axis, h: Rational) -> Self {
        Self { kind: OpKind::DeltaTilde(lead), h }
    }

    /// The inverse partner, with the same `h`.
    pub fn inverse(&self) -> Self {
        let kind = match self.kind {
            OpKind::Nabla(a, b) => OpKind::Delta(a, b),
            OpKind::Delta(a, b) => OpKind::Nabla(a, b),
            OpKind::NablaTilde(a) => OpKind::DeltaTilde(a),
            OpKind::DeltaTilde(a) => OpKind::NablaTilde(a),
        };
        Self { kind, h: self.h.clone() }
    }

    /// Factor by which the operator multiplies `x^m y^n z^p`.
    pub fn eigenvalue(&self, idx: MultiIndex3) -> Result<Rational> {
        let h = &self.h;
        match self.kind {
            OpKind::Nabla(a, b) => {
                let (u, v) = (idx.get(a), idx.get(b));
                pochhammer_ratio(h, u + v, u, v)
            }
            OpKind::Delta(a, b) => {
                let (u, v) = (idx.get(a), idx.get(b));
                let num = pochhammer(h, u) * pochhammer(h, v);
                num.checked_div(&pochhammer(h, u + v)).map_err(|_| {
                    Error::SingularParameter(format!("h = {h} gives a vanishing Pochhammer at depth {}", u + v))
                })
            }
            OpKind::NablaTilde(lead) => {
                let u = idx.get(lead);
                pochhammer_ratio(h, idx.total(), u, idx.total() - u)
            }
            OpKind::DeltaTilde(lead) => {
                let u = idx.get(lead);
                let num = pochhammer(h, u) * pochhammer(h, idx.total() - u);
                num.checked_div(&pochhammer(h, idx.total())).map_err(|_| {
                    Error::SingularParameter(format!(
                        "h = {h} gives a vanishing Pochhammer at depth {}",
                        idx.total()
                    ))
                })
            }
        }
    }
}

impl fmt::Display for DiagonalOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind, self.h)
    }
}

/// Product of diagonal operators. Order is irrelevant to the result but kept
/// as written.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OperatorChain {
    pub ops: Vec<DiagonalOp>,
}

impl OperatorChain {
    pub fn new(ops: Vec<DiagonalOp>) -> Self {
        Self { ops }
    }

    pub fn eigenvalue(&self, idx: MultiIndex3) -> Result<Rational> {
        let mut out = Rational::one();
        for op in &self.ops {
            out = out * op.eigenvalue(idx)?;
        }
        Ok(out)
    }

    pub fn apply(&self, s: &TruncatedSeries) -> Result<TruncatedSeries> {
        if self.ops.is_empty() {
            return Ok(s.clone());
        }
        s.map_coeffs(|idx, c| Ok(c * self.eigenvalue(idx)?))
    }
}

impl fmt::Display for OperatorChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ops.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}
