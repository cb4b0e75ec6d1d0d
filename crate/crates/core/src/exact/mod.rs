//! Exact arithmetic over the integers, the rationals and finite fields.

pub mod arith;
pub mod expr;
pub mod fp;
pub mod hensel;
pub mod irreducible;
pub mod matrix;
pub mod ratpoly;
pub mod unipoly;

pub use expr::{parse_polynomial, Polynomial};
pub use fp::{factor_mod_p, FactorizationModP, FpPoly};
pub use hensel::hensel_lift;
pub use irreducible::find_factor;
pub use ratpoly::RatPoly;
pub use matrix::Scalar;
pub use unipoly::{resultant, UniPoly};
