//! Exact arithmetic layer: rationals, polynomials, small matrices and
//! continued fractions.

pub mod contfrac;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod upoly;

pub use contfrac::{
    continued_fraction, hirzebruch_jung, hirzebruch_jung_value, subtractive_euclid_steps, ContinuedFraction,
};
pub use linalg::{DenseMatrix, Matrix2};
pub use poly::BivariatePolynomial;
pub use rational::{int, parse_rational, rat, Rational};
pub use upoly::UniPoly;

/// Order (lowest total degree) of a nonzero polynomial.
pub fn poly_order(f: &BivariatePolynomial) -> crate::Result<u32> {
    f.order()
}
