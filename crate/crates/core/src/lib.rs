//! Border bases of zero-dimensional quotient algebras, their Hensel lifts
//! over truncated power series, and local Bézout counts.

pub mod borderbasis;
pub mod cli;
pub mod continuity;
pub mod error;
pub mod groebner;
pub mod hensel;
pub mod io;
pub mod json;
pub mod localzero;
pub mod matrix;
pub mod polynomials;
pub mod scalars;

pub use error::{Error, Result};
