//! Exact multivariate polynomials over the rationals in deglex order.

mod map;
mod monomial;
mod parse;
mod polynomial;

pub use map::PolyMap;
#[cfg(feature = "mutation-hooks")]
pub use monomial::set_corrupted_order;
pub use monomial::Monomial;
pub use parse::{
    parse_map, parse_polynomial, parse_polynomial_auto, parse_polynomial_in, parse_univariate,
    ParseError,
};
pub use polynomial::{univariate_text, variable_names, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("arity mismatch: expected {expected} variables, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("operation requires two variables, found {0}")]
    NotBivariate(usize),
}
