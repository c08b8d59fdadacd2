//! Finite fields F_{p^m}, the polynomial ring A = F_p[θ] and its fraction field.

mod field;
mod parse;
mod poly;
mod ratfunc;

pub use field::{ExtField, ExtFieldElem};
pub use parse::{parse_poly, parse_ratfunc, parse_rational};
pub use poly::{enumerate_monic, first_irreducible, is_irreducible, Poly};
pub use ratfunc::RatFunc;

pub(crate) use poly::is_prime;
