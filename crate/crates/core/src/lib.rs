//! Exact singularity calculus and the ε-adjoint minimal model program for
//! rank-one foliations on surfaces.

pub mod error;
pub mod exact;
pub mod germ;
pub mod mmp;
pub mod quotient;
pub mod restree;
pub mod surface;

pub use error::{Error, Result};
pub use exact::{BivariatePolynomial, ContinuedFraction, Rational};
