//! Exact arithmetic: half-integers, Laurent polynomials in `v = q^{1/2}`,
//! canonical rational functions of v, and factored torus expressions.

pub mod cyclotomic;
mod factored;
mod halfint;
pub mod laurent;
mod parse;
mod ratfunc;

pub use factored::{FactorRecord, FactoredExpr, TorusFactor};
pub use halfint::{HalfInt, ParseHalfIntError};
pub use laurent::HalfPowerPoly;
pub use parse::{parse_factored, parse_ratfunc};
pub use ratfunc::RatFunc;
