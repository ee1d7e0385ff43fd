//! Exact coefficient ring: big rationals and polynomials in the system
//! parameters.

pub mod ppoly;
pub mod rational;

pub use ppoly::{ParamMonomial, ParamPolynomial, ParamTable};
pub use rational::Rational;
