//! Exact arithmetic substrate: rationals, Pochhammer symbols, multi-indices
//! and total-degree truncated power series in three variables.

mod index;
mod rational;
mod series;

pub use index::{Axis, MultiIndex3};
pub use rational::{factorial, pochhammer, Rational};
pub use series::{binomial_series, TruncatedSeries};
