//! Local intersection numbers of plane curve germs, and the index
//! formulas tying a catalogue curve's degrees to its marked points.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{BivariatePolynomial, Rational};
use crate::germ::{Chart, VectorFieldGerm};
use crate::restree::site::strict_transform;

const MAX_DEPTH: usize = 64;

/// `dim O/(f, g)` at the origin, by blowing up common points.
pub fn intersection_multiplicity(f: &BivariatePolynomial, g: &BivariatePolynomial) -> Result<u32> {
    local_intersection(f, g, 0)
}

fn local_intersection(f: &BivariatePolynomial, g: &BivariatePolynomial, depth: usize) -> Result<u32> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::InvalidInput(
            "intersection with the zero polynomial".into(),
        ));
    }
    if !f.vanishes_at_origin() || !g.vanishes_at_origin() {
        return Ok(0);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::InvalidInput(
            "curves share a component through the point".into(),
        ));
    }
    let mut total = f.order()? * g.order()?;
    let (f1, g1) = (
        strict_transform(f, Chart::First),
        strict_transform(g, Chart::First),
    );
    let common = f1.restrict_x_zero().gcd(&g1.restrict_x_zero());
    if common.degree().unwrap_or(0) > 0 {
        let (roots, rest) = common.rational_roots()?;
        if rest.degree().unwrap_or(0) > 0 {
            return Err(Error::NonRationalPoint(format!(
                "common tangent directions at the roots of {rest}"
            )));
        }
        let zero = Rational::zero();
        for (t, _) in roots {
            total += local_intersection(&f1.translate(&zero, &t), &g1.translate(&zero, &t), depth + 1)?;
        }
    }
    let (f2, g2) = (
        strict_transform(f, Chart::Second),
        strict_transform(g, Chart::Second),
    );
    total += local_intersection(&f2, &g2, depth + 1)?;
    Ok(total)
}

/// Order of vanishing of the foliation along a smooth invariant branch.
pub fn zero_order(germ: &VectorFieldGerm, f: &BivariatePolynomial) -> Result<u32> {
    if f.order()? != 1 {
        return Err(Error::InvalidInput("zero order needs a smooth branch".into()));
    }
    if !f.d_dy().constant_term().is_zero() {
        intersection_multiplicity(f, germ.a())
    } else {
        intersection_multiplicity(f, germ.b())
    }
}

/// Tangency order between the foliation and a non-invariant branch.
pub fn tangency_order(germ: &VectorFieldGerm, f: &BivariatePolynomial) -> Result<u32> {
    let d = germ.apply(f);
    if d.is_zero() {
        return Err(Error::InvalidInput("branch is invariant".into()));
    }
    intersection_multiplicity(f, &d)
}
