//! Rank-one foliation germs at a smooth surface point, given by polynomial
//! vector fields `a ∂x + b ∂y`, and their point blow-ups.

mod format;

pub use format::{parse_germ_file, BoundaryBranch, GermFile, GERM_HEADER};

use std::fmt;

use num_integer::Roots;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{BivariatePolynomial, Matrix2, Rational, UniPoly};

pub const DEFAULT_DEGREE_CAP: u32 = 16;

/// `a ∂x + b ∂y` with polynomial coefficients; not both zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorFieldGerm {
    a: BivariatePolynomial,
    b: BivariatePolynomial,
    saturated: bool,
}

impl VectorFieldGerm {
    pub fn new(a: BivariatePolynomial, b: BivariatePolynomial) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::InvalidInput(
                "vector field with both coefficients zero".into(),
            ));
        }
        Ok(Self {
            a,
            b,
            saturated: false,
        })
    }

    /// Builds and saturates in one go.
    pub fn saturated(a: BivariatePolynomial, b: BivariatePolynomial) -> Result<Self> {
        Ok(Self::new(a, b)?.saturate())
    }

    /// `p x ∂x + q y ∂y`
    pub fn linear_diagonal(p: i64, q: i64) -> Self {
        let a = BivariatePolynomial::monomial(1, 0, Rational::from_integer(p.into()));
        let b = BivariatePolynomial::monomial(0, 1, Rational::from_integer(q.into()));
        Self::saturated(a, b).expect("nonzero eigenvalues")
    }

    /// The regular germ `∂x`.
    pub fn regular() -> Self {
        Self {
            a: BivariatePolynomial::one(),
            b: BivariatePolynomial::zero(),
            saturated: true,
        }
    }

    pub fn a(&self) -> &BivariatePolynomial {
        &self.a
    }

    pub fn b(&self) -> &BivariatePolynomial {
        &self.b
    }

    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    /// Divides out `gcd(a, b)`.
    pub fn saturate(&self) -> Self {
        if self.saturated {
            return self.clone();
        }
        let g = self.a.gcd(&self.b);
        if g.degree() == Some(0) {
            return Self {
                a: self.a.clone(),
                b: self.b.clone(),
                saturated: true,
            };
        }
        Self {
            a: self.a.exact_div(&g).expect("gcd divides"),
            b: self.b.exact_div(&g).expect("gcd divides"),
            saturated: true,
        }
    }

    pub fn is_singular(&self) -> bool {
        self.a.vanishes_at_origin() && self.b.vanishes_at_origin()
    }

    /// `a(P) = min(ord a, ord b)`, the order of the dual form `a dy - b dx`.
    pub fn order(&self) -> u32 {
        let oa = self.a.order().unwrap_or(u32::MAX);
        let ob = self.b.order().unwrap_or(u32::MAX);
        oa.min(ob)
    }

    pub fn degree(&self) -> u32 {
        self.a.degree().unwrap_or(0).max(self.b.degree().unwrap_or(0))
    }

    pub fn linear_part(&self) -> LinearPart {
        LinearPart {
            matrix: Matrix2::new(
                self.a.coeff(1, 0),
                self.a.coeff(0, 1),
                self.b.coeff(1, 0),
                self.b.coeff(0, 1),
            ),
            regular: !self.is_singular(),
        }
    }

    /// The same foliation in the coordinates `(y, x)`.
    pub fn swap(&self) -> Self {
        Self {
            a: self.b.swap_vars(),
            b: self.a.swap_vars(),
            saturated: self.saturated,
        }
    }

    /// The germ at the point `(x0, y0)`, moved to the origin.
    pub fn translate(&self, x0: &Rational, y0: &Rational) -> Self {
        Self {
            a: self.a.translate(x0, y0),
            b: self.b.translate(x0, y0),
            saturated: self.saturated,
        }
    }

    /// The derivation `a f_x + b f_y`.
    pub fn apply(&self, f: &BivariatePolynomial) -> BivariatePolynomial {
        &(&self.a * &f.d_dx()) + &(&self.b * &f.d_dy())
    }

    /// Whether the curve `f = 0` is invariant, i.e. `f` divides `∂f`.
    pub fn leaves_invariant(&self, f: &BivariatePolynomial) -> bool {
        let df = self.apply(f);
        df.is_zero() || df.exact_div(f).is_some()
    }

    /// Whether the curve `f = 0` through the origin is smooth there and not
    /// tangent to the foliation (only meaningful at regular points).
    pub fn is_transverse_to(&self, f: &BivariatePolynomial) -> bool {
        !self.apply(f).constant_term().is_zero()
    }

    /// Blow-up is dicritical iff `x b_ν - y a_ν` vanishes identically.
    pub fn is_dicritical(&self) -> bool {
        let nu = self.order();
        let a_nu = self.a.homogeneous_part(nu);
        let b_nu = self.b.homogeneous_part(nu);
        (&(&BivariatePolynomial::x() * &b_nu) - &(&BivariatePolynomial::y() * &a_nu)).is_zero()
    }

    /// The transformed germ in one standard chart, with the exceptional
    /// divisor at `{x = 0}`, and the power of `x` divided out.
    pub fn chart(&self, chart: Chart) -> (VectorFieldGerm, u32) {
        match chart {
            Chart::First => self.chart_first(),
            Chart::Second => self.swap().chart_first(),
        }
    }

    // (x, t) with y = x t: ẋ = a, ṫ = (b - t a) / x, scaled by x.
    fn chart_first(&self) -> (VectorFieldGerm, u32) {
        let a_c = self.a.chart_x();
        let b_c = self.b.chart_x();
        let comp_x = a_c.mul_x_pow(1);
        let comp_t = &b_c - &(&BivariatePolynomial::y() * &a_c);
        let k = comp_x.x_valuation().min(comp_t.x_valuation());
        // away from E the chart map is an isomorphism, so only powers of x
        // can become common factors of a saturated field
        let germ = VectorFieldGerm {
            a: comp_x.div_x_pow(k),
            b: comp_t.div_x_pow(k),
            saturated: self.saturated,
        };
        (germ, k)
    }

    /// Blows up the origin.
    pub fn blow_up(&self) -> Result<BlowUpResult> {
        let g = self.saturate();
        let order = g.order();
        let dicritical = g.is_dicritical();
        let iota = u8::from(dicritical);
        let (first, k) = g.chart(Chart::First);
        let (second, _) = g.chart(Chart::Second);
        let discrepancy = -Rational::from_integer((order as i64 + iota as i64 - 1).into());
        let mut result = BlowUpResult {
            charts: [first, second],
            exceptional_invariant: !dicritical,
            iota,
            order,
            saturation_exponent: k,
            foliation_discrepancy: discrepancy,
            singular_points: Vec::new(),
            irrational_singular_factors: Vec::new(),
        };
        let (points, irrational) = singular_points_on_exceptional(&result)?;
        result.singular_points = points;
        result.irrational_singular_factors = irrational;
        Ok(result)
    }

    /// Whether the restriction of the field to `{x = 0}` is tangent to it,
    /// i.e. `{x = 0}` is invariant.
    pub fn x_axis_invariant(&self) -> bool {
        self.a.restrict_x_zero().is_zero()
    }

    /// Polynomial in `t` whose roots are the special points of `{x = 0}`:
    /// singular points if the line is invariant, tangency points otherwise.
    pub fn special_polynomial_on_x_axis(&self) -> UniPoly {
        if self.x_axis_invariant() {
            self.b.restrict_x_zero()
        } else {
            self.a.restrict_x_zero()
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        format::parse_germ_line(text, 1, DEFAULT_DEGREE_CAP)
    }
}

impl fmt::Display for VectorFieldGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dx: {}, dy: {}", self.a, self.b)
    }
}

/// One of the two standard charts of a point blow-up. Both are presented
/// with the exceptional divisor at `{x = 0}`: the first chart has
/// coordinates `(x, t)` with `y = x t`, the second `(y, s)` with `x = s y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Chart {
    First,
    Second,
}

/// A point `(0, t)` of the exceptional divisor in a chart.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ExceptionalPoint {
    pub chart: Chart,
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub t: Rational,
}

impl ExceptionalPoint {
    pub fn first(t: Rational) -> Self {
        Self {
            chart: Chart::First,
            t,
        }
    }

    /// The point of E missing from the first chart (`s = 0`).
    pub fn at_infinity() -> Self {
        Self {
            chart: Chart::Second,
            t: Rational::zero(),
        }
    }
}

impl fmt::Display for ExceptionalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.chart {
            Chart::First => write!(f, "t={}", self.t),
            Chart::Second => write!(f, "s={}", self.t),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowUpResult {
    pub charts: [VectorFieldGerm; 2],
    pub exceptional_invariant: bool,
    pub iota: u8,
    /// `a(P)`
    pub order: u32,
    /// Power of the exceptional coordinate divided out in the charts.
    pub saturation_exponent: u32,
    pub foliation_discrepancy: Rational,
    pub singular_points: Vec<ExceptionalPoint>,
    /// Square-free factors of the singular locus on E without rational roots.
    pub irrational_singular_factors: Vec<(UniPoly, usize)>,
}

impl BlowUpResult {
    pub fn chart(&self, chart: Chart) -> &VectorFieldGerm {
        match chart {
            Chart::First => &self.charts[0],
            Chart::Second => &self.charts[1],
        }
    }

    /// The transformed germ moved to the origin at the given point of E.
    pub fn germ_at(&self, p: &ExceptionalPoint) -> VectorFieldGerm {
        self.chart(p.chart).translate(&Rational::zero(), &p.t)
    }
}

/// Singular points of the transformed foliation on E, deduplicated across
/// charts (the second chart only contributes its point at `s = 0`).
pub fn singular_points_on_exceptional(
    r: &BlowUpResult,
) -> Result<(Vec<ExceptionalPoint>, Vec<(UniPoly, usize)>)> {
    let first = r.chart(Chart::First);
    let g = first.a.restrict_x_zero().gcd(&first.b.restrict_x_zero());
    if g.is_zero() {
        return Err(Error::NonIsolatedSingularities);
    }
    let mut points = Vec::new();
    let mut irrational = Vec::new();
    if g.degree().unwrap_or(0) > 0 {
        let (roots, rest) = g.rational_roots()?;
        points.extend(roots.into_iter().map(|(t, _)| ExceptionalPoint::first(t)));
        irrational = rest.square_free();
    }
    if r.chart(Chart::Second).is_singular() {
        points.push(ExceptionalPoint::at_infinity());
    }
    Ok((points, irrational))
}

/// Jacobian of `(a, b)` at the origin.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LinearPart {
    pub matrix: Matrix2,
    /// Set when the germ does not vanish at the origin.
    pub regular: bool,
}

/// Shape of the eigenvalues of a linear part.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EigenKind {
    Zero,
    Nilpotent,
    /// One zero eigenvalue, one nonzero.
    SaddleNode,
    /// Eigenvalue ratio `p/q` with `p >= q >= 1` coprime.
    PositiveRational {
        p: u64,
        q: u64,
    },
    /// Any other non-nilpotent case: ratio irrational, negative or non-real.
    NonResonant,
}

impl LinearPart {
    pub fn is_nilpotent(&self) -> bool {
        self.matrix.is_nilpotent()
    }

    pub fn eigen_kind(&self) -> EigenKind {
        let m = &self.matrix;
        if m.is_zero() {
            return EigenKind::Zero;
        }
        if m.is_nilpotent() {
            return EigenKind::Nilpotent;
        }
        let (tr, det) = (m.trace(), m.det());
        if det.is_zero() {
            return EigenKind::SaddleNode;
        }
        if !det.is_positive() || tr.is_zero() {
            return EigenKind::NonResonant;
        }
        // ratio p/q gives tr^2/det = (p+q)^2/(pq) in lowest terms
        let s = &tr * &tr / &det;
        let (n, d) = match (s.numer().to_u64(), s.denom().to_u64()) {
            (Some(n), Some(d)) => (n, d),
            _ => return EigenKind::NonResonant,
        };
        let sum = n.sqrt();
        if sum * sum != n {
            return EigenKind::NonResonant;
        }
        let disc = match (sum * sum).checked_sub(4 * d) {
            Some(v) => v,
            None => return EigenKind::NonResonant,
        };
        let r = disc.sqrt();
        if r * r != disc {
            return EigenKind::NonResonant;
        }
        EigenKind::PositiveRational {
            p: (sum + r) / 2,
            q: (sum - r) / 2,
        }
    }

    /// Reduced in the sense of Seidenberg: non-nilpotent with eigenvalue
    /// ratio outside the positive rationals, or a saddle-node.
    pub fn is_reduced(&self) -> bool {
        matches!(self.eigen_kind(), EigenKind::SaddleNode | EigenKind::NonResonant)
    }
}

/// Log canonical iff the linear part is non-nilpotent.
pub fn is_log_canonical_germ(g: &VectorFieldGerm) -> Result<bool> {
    if !g.is_singular() {
        return Err(Error::Precondition(
            "log canonicity is only asked at singular points".into(),
        ));
    }
    Ok(!g.saturate().linear_part().is_nilpotent())
}
