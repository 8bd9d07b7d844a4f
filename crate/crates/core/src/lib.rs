//! Srivastava's triple hypergeometric functions H_A, H_B, H_C: exact series
//! algebra, float evaluation, operator identities, decomposition audits and
//! quadrature cross-checks.

pub mod audit;
pub mod catalog;
pub mod compensated;
pub mod decomposition;
pub mod error;
pub mod kernel;
pub mod notation;
pub mod operators;
pub mod quadrature;
pub mod registry;

pub use error::{Error, Result};
