//! Exact Plancherel densities for Bernstein components of GL(n) over a
//! non-archimedean local field, with the identities that tie the formulas
//! together.

pub mod combinatorics;
pub mod degrees;
pub mod document;
pub mod error;
pub mod exactalg;
pub mod groupdata;
pub mod invariants;
pub mod mu;
pub mod plancherel;
pub mod transfer;
pub mod verify;

pub use error::{Error, Result};
pub use exactalg::{FactoredExpr, HalfInt, HalfPowerPoly, RatFunc, TorusFactor};
