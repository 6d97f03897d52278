//! Exact scalars: big integers, Laurent polynomials, rational functions in canonical
//! form, and directed series expansion.

mod error;
mod gcd;
mod int;
mod monomial;
mod poly;
mod ratfunc;
mod series;
mod symbol;
mod text;

pub use error::ScalarError;
pub use gcd::{gcd, normalize_unit};
pub use int::Int;
pub use monomial::Monomial;
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use series::{delta_difference, expand, DirectedSeries, Direction, Expander, MAX_WINDOW};
pub use symbol::{registry, Registry, Symbol, ALPHABET, MAX_SYMBOLS};
pub use text::{parse_poly, parse_ratfunc, MAX_GROUP_EXPONENT, MAX_SYMBOL_EXPONENT};
