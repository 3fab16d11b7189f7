//! Infinitely near points carrying the curves through them, and the
//! discrepancy ledger update for one blow-up.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::error::Result;
use crate::exact::{BivariatePolynomial, Rational, UniPoly};
use crate::germ::{BlowUpResult, BoundaryBranch, Chart, ExceptionalPoint, VectorFieldGerm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum CurveSource {
    /// Index into the divisor list of the owning search or tree.
    Exceptional(usize),
    Boundary(usize),
    /// A curve contracted before the search started.
    External(usize),
}

/// A curve through a site, in the site's local coordinates.
#[derive(Clone, Debug)]
pub(crate) struct SiteCurve {
    pub equation: BivariatePolynomial,
    pub invariant: bool,
    /// Per unit of multiplicity, the contribution to `(a_fol, a_var)` of a
    /// divisor centered here.
    pub weight: (Rational, Rational),
    pub source: CurveSource,
}

impl SiteCurve {
    pub fn multiplicity(&self) -> u32 {
        self.equation.order().unwrap_or(0)
    }

    pub fn boundary(index: usize, br: &BoundaryBranch) -> Self {
        let c = br.coefficient.clone();
        let fol = if br.invariant {
            Rational::zero()
        } else {
            -c.clone()
        };
        Self {
            equation: br.equation.clone(),
            invariant: br.invariant,
            weight: (fol, -c),
            source: CurveSource::Boundary(index),
        }
    }

    fn strict_transform(&self, chart: Chart) -> BivariatePolynomial {
        strict_transform(&self.equation, chart)
    }
}

/// The strict transform of `{f = 0}` in a chart of the blow-up of the origin.
pub(crate) fn strict_transform(f: &BivariatePolynomial, chart: Chart) -> BivariatePolynomial {
    let m = f.order().unwrap_or(0);
    let eq = match chart {
        Chart::First => f.clone(),
        Chart::Second => f.swap_vars(),
    };
    eq.chart_x().div_x_pow(m)
}

/// Singular points of the transformed foliation on E and, when E is not
/// invariant, its tangency points. The second value collects the part of
/// the first-chart polynomial without rational roots.
pub(crate) fn special_points(bu: &BlowUpResult) -> Result<(BTreeSet<ExceptionalPoint>, UniPoly)> {
    let mut points = BTreeSet::new();
    let special = bu.chart(Chart::First).special_polynomial_on_x_axis();
    let mut rest = UniPoly::constant(Rational::one());
    if special.degree().unwrap_or(0) > 0 {
        let (roots, r) = special.rational_roots()?;
        points.extend(roots.into_iter().map(|(t, _)| ExceptionalPoint::first(t)));
        rest = r;
    }
    let second = bu.chart(Chart::Second);
    if second
        .special_polynomial_on_x_axis()
        .eval(&Rational::zero())
        .is_zero()
    {
        points.insert(ExceptionalPoint::at_infinity());
    }
    Ok((points, rest))
}

/// A branch at the origin of a divisor that is already exceptional over
/// the point under study, with its discrepancies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedBranch {
    pub equation: BivariatePolynomial,
    pub invariant: bool,
    pub a_fol: Rational,
    pub a_var: Rational,
}

#[derive(Clone, Debug)]
pub(crate) struct Site {
    pub germ: VectorFieldGerm,
    pub curves: Vec<SiteCurve>,
    /// Number of blow-ups already performed above this point.
    pub depth: usize,
    /// Centers after the first one (which is the origin of the root germ).
    pub path: Vec<ExceptionalPoint>,
}

/// Outcome of blowing up a site: the new divisor's ledger entries.
#[derive(Clone, Debug)]
pub(crate) struct SiteBlowUp {
    pub result: BlowUpResult,
    pub iota: u8,
    pub a_fol: Rational,
    pub a_var: Rational,
    /// Exceptional divisors (by source index) through the center.
    pub exceptionals_through: Vec<usize>,
}

impl Site {
    pub fn root(germ: VectorFieldGerm, boundary: &[BoundaryBranch]) -> Self {
        Self::root_with(germ, boundary, &[])
    }

    pub fn root_with(
        germ: VectorFieldGerm,
        boundary: &[BoundaryBranch],
        exceptional: &[WeightedBranch],
    ) -> Self {
        let mut curves: Vec<SiteCurve> = boundary
            .iter()
            .enumerate()
            .map(|(i, b)| SiteCurve::boundary(i, b))
            .collect();
        curves.extend(exceptional.iter().enumerate().map(|(i, w)| SiteCurve {
            equation: w.equation.clone(),
            invariant: w.invariant,
            weight: (w.a_fol.clone(), w.a_var.clone()),
            source: CurveSource::External(i),
        }));
        Self {
            germ: germ.saturate(),
            curves,
            depth: 0,
            path: Vec::new(),
        }
    }

    pub fn blow_up(&self) -> Result<SiteBlowUp> {
        let result = self.germ.blow_up()?;
        let mut a_fol = result.foliation_discrepancy.clone();
        let mut a_var = Rational::one();
        let mut through = Vec::new();
        for c in &self.curves {
            let m = Rational::from_integer(c.multiplicity().into());
            a_fol += &c.weight.0 * &m;
            a_var += &c.weight.1 * &m;
            if let CurveSource::Exceptional(i) = c.source {
                through.push(i);
            }
        }
        Ok(SiteBlowUp {
            iota: result.iota,
            result,
            a_fol,
            a_var,
            exceptionals_through: through,
        })
    }

    /// Points of the new divisor met by strict transforms of the site's
    /// curves; the flag is set when some intersection is not rational.
    pub fn curve_points(&self) -> (BTreeSet<ExceptionalPoint>, bool) {
        let mut points = BTreeSet::new();
        let mut irrational = false;
        for c in &self.curves {
            let st = c.strict_transform(Chart::First);
            let on_e = st.restrict_x_zero();
            if on_e.degree().unwrap_or(0) > 0 {
                match on_e.rational_roots() {
                    Ok((roots, rest)) => {
                        points.extend(roots.into_iter().map(|(t, _)| ExceptionalPoint::first(t)));
                        irrational |= rest.degree().unwrap_or(0) > 0;
                    }
                    Err(_) => irrational = true,
                }
            }
            if c.strict_transform(Chart::Second).constant_term().is_zero() {
                points.insert(ExceptionalPoint::at_infinity());
            }
        }
        (points, irrational)
    }

    /// The site at a point of the new divisor created by `bu`, which is
    /// recorded as exceptional number `divisor`.
    pub fn child(&self, bu: &SiteBlowUp, divisor: usize, point: &ExceptionalPoint) -> Site {
        let zero = Rational::zero();
        let mut curves = vec![SiteCurve {
            equation: BivariatePolynomial::x(),
            invariant: bu.iota == 0,
            weight: (bu.a_fol.clone(), bu.a_var.clone()),
            source: CurveSource::Exceptional(divisor),
        }];
        for c in &self.curves {
            let local = c.strict_transform(point.chart).translate(&zero, &point.t);
            if local.vanishes_at_origin() {
                curves.push(SiteCurve {
                    equation: local,
                    invariant: c.invariant,
                    weight: c.weight.clone(),
                    source: c.source.clone(),
                });
            }
        }
        let mut path = self.path.clone();
        path.push(point.clone());
        Site {
            germ: bu.result.germ_at(point),
            curves,
            depth: self.depth + 1,
            path,
        }
    }
}
