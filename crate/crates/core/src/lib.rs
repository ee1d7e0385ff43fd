//! Exact normal forms and integrability obstructions for nondegenerate
//! Hopf-zero singularities.

pub mod analyzers;
pub mod coeffring;
pub mod error;
pub mod frontend;
pub mod goldens;
pub mod gradedpoly;
pub mod homological;
pub mod linsolve;
pub mod normalform;
pub mod vectorfield;

pub use error::{Error, Result};
