//! Exact elliptic-curve arithmetic over ℚ and quadratic fields ℚ(√d):
//! quadratic twists, torsion subgroups, Mestre–Nagao twist sieving and
//! canonical-height independence certificates.

pub mod cli;
pub mod curve;
pub mod error;
pub mod exactnum;
pub mod field;
pub mod heights;
pub mod modp;
pub mod poly;
pub mod quadfield;
pub mod records;
pub mod sieve;
pub mod torsion;
pub mod twistdecomp;

pub use error::{Error, Result};
