//! Monomials, sparse polynomials, order ideals and their borders.

mod monomial;
mod order_ideal;
mod parse;
mod polynomial;

pub use monomial::{deformation_names, variable_names, Monomial, MonomialOrder};
pub use order_ideal::{is_closed_by_division, OrderIdeal};
pub use parse::{parse_polynomial, VarTable};
pub(crate) use polynomial::signed_term;
pub use polynomial::{PolyCtx, Polynomial};
