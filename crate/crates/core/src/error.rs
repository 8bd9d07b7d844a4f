use thiserror::Error;

use crate::kernel::MultiIndex3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("series caps differ ({0} vs {1})")]
    CapMismatch(u32, u32),

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("arity mismatch: {0}")]
    ArityMismatch(String),

    #[error("missing parameter `{0}`")]
    MissingParam(String),

    #[error("non-finite value during summation")]
    NonFinite,

    #[error("singular parameter: {0}")]
    SingularParameter(String),

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("divergence suspected after {shells} shells")]
    DivergenceSuspected { shells: u32 },

    #[error("constraint violated: {0}")]
    ConstraintViolated(String),

    #[error("integrand singular at node: {0}")]
    IntegrandSingular(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("bad quadrature configuration: {0}")]
    BadConfig(String),

    #[error("index {0} outside the series cap {1}")]
    OutsideCap(MultiIndex3, u32),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
