use serde::{Deserialize, Serialize};

use crate::catalog::ParamSet;
use crate::error::{Error, Result};
use crate::kernel::{MultiIndex3, Rational, TruncatedSeries};
use crate::notation::{bind_chain, FnCall, OpTemplate};
use crate::registry::registry;

/// Outcome of an exact coefficient comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Verdict {
    Verified {
        degree: u32,
    },
    /// `expected` is the left-hand coefficient, `actual` the right-hand one.
    Failed {
        first_bad_index: MultiIndex3,
        expected: Rational,
        actual: Rational,
    },
}

impl Verdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified { .. })
    }

    pub(crate) fn compare(lhs: &TruncatedSeries, rhs: &TruncatedSeries, degree: u32) -> Verdict {
        match lhs.first_difference(rhs) {
            None => Verdict::Verified { degree },
            Some((first_bad_index, expected, actual)) => Verdict::Failed { first_bad_index, expected, actual },
        }
    }
}

/// Parameter troubles met while building either side are reported as a
/// singular parameter of the identity.
pub(crate) fn as_singular(e: Error) -> Error {
    match e {
        Error::BadParams(msg) => Error::SingularParameter(msg),
        Error::DivisionByZero => Error::SingularParameter("division by zero".into()),
        other => other,
    }
}

/// `lhs = chain applied to the product of rhs`.
#[derive(Debug, Clone)]
pub struct IdentityEntry {
    pub id: String,
    pub lhs: FnCall,
    pub chain: Vec<OpTemplate>,
    pub rhs: Vec<FnCall>,
    pub lhs_text: String,
    pub chain_text: String,
    pub rhs_text: String,
    pub corrected: Option<IdentityFix>,
}

/// A repaired right-hand side for an identity that fails as printed.
#[derive(Debug, Clone)]
pub struct IdentityFix {
    pub note: String,
    pub chain: Vec<OpTemplate>,
    pub rhs: Vec<FnCall>,
}

fn product_side(chain: &[OpTemplate], rhs: &[FnCall], ps: &ParamSet<Rational>, degree: u32) -> Result<TruncatedSeries> {
    let mut prod = TruncatedSeries::one(degree);
    for f in rhs {
        prod = prod.mul(&f.series(ps, &[], degree).map_err(as_singular)?)?;
    }
    bind_chain(chain, ps)?.apply(&prod)
}

impl IdentityEntry {
    pub fn lhs_series(&self, ps: &ParamSet<Rational>, degree: u32) -> Result<TruncatedSeries> {
        self.lhs.series(ps, &[], degree).map_err(as_singular)
    }

    pub fn rhs_series(&self, ps: &ParamSet<Rational>, degree: u32) -> Result<TruncatedSeries> {
        product_side(&self.chain, &self.rhs, ps, degree)
    }

    pub fn verify_corrected(&self, ps: &ParamSet<Rational>, degree: u32) -> Result<Verdict> {
        let fix = self
            .corrected
            .as_ref()
            .ok_or_else(|| Error::UnknownIdentity(format!("{} has no corrected variant", self.id)))?;
        let lhs = self.lhs_series(ps, degree)?;
        Ok(Verdict::compare(&lhs, &product_side(&fix.chain, &fix.rhs, ps, degree)?, degree))
    }

    pub fn verify(&self, ps: &ParamSet<Rational>, degree: u32) -> Result<Verdict> {
        self.verify_split(ps, ps, degree)
    }

    /// Same as [`IdentityEntry::verify`] with separate bindings per side.
    pub fn verify_split(
        &self,
        lhs_params: &ParamSet<Rational>,
        rhs_params: &ParamSet<Rational>,
        degree: u32,
    ) -> Result<Verdict> {
        let lhs = self.lhs_series(lhs_params, degree)?;
        let rhs = self.rhs_series(rhs_params, degree)?;
        Ok(Verdict::compare(&lhs, &rhs, degree))
    }
}

/// Checks a registered operator identity coefficient by coefficient up to
/// total degree `degree`.
pub fn verify_operator_identity(id: &str, params: &ParamSet<Rational>, degree: u32) -> Result<Verdict> {
    registry().identity(id)?.verify(params, degree)
}
