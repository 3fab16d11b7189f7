//! Foliated surface models: a lattice, the canonical classes, a curve
//! catalogue with marked points, and a boundary.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::incidence::{intersection_multiplicity, tangency_order, zero_order};
use super::lattice::{DivisorClass, PicardLattice};
use crate::error::{Error, Result};
use crate::exact::{BivariatePolynomial, Rational};
use crate::germ::{BoundaryBranch, Chart, ExceptionalPoint, VectorFieldGerm};
use crate::restree::site::{special_points, strict_transform};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BaseSurface {
    ProjectivePlane,
    Hirzebruch(u32),
}

impl BaseSurface {
    pub fn lattice(&self) -> PicardLattice {
        match self {
            BaseSurface::ProjectivePlane => PicardLattice::projective_plane(),
            BaseSurface::Hirzebruch(n) => PicardLattice::hirzebruch(*n),
        }
    }

    /// `K` in the base basis: `-3H`, or `-2C0 - (n + 2)F`.
    pub fn canonical(&self) -> DivisorClass {
        match self {
            BaseSurface::ProjectivePlane => DivisorClass::from_integers(&[-3]),
            BaseSurface::Hirzebruch(n) => DivisorClass::from_integers(&[-(*n as i64) - 2, -2]),
        }
    }

    pub fn name(&self) -> String {
        match self {
            BaseSurface::ProjectivePlane => "P2".into(),
            BaseSurface::Hirzebruch(n) => format!("F{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogueCurve {
    pub name: String,
    pub class: DivisorClass,
    pub invariant: bool,
    pub genus: u32,
}

/// A local branch of a catalogue curve at a marked point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Branch {
    pub curve: usize,
    #[serde(serialize_with = "crate::exact::rational::serialize_display")]
    pub equation: BivariatePolynomial,
}

/// A point of the surface with the foliation germ there, in local
/// coordinates shared by its branches.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MarkedPoint {
    pub name: String,
    #[serde(serialize_with = "crate::exact::rational::serialize_display")]
    pub germ: VectorFieldGerm,
    pub branches: Vec<Branch>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryComponent {
    pub curve: usize,
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub coefficient: Rational,
}

/// Where to blow up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlowUpCenter {
    /// A marked point, by index.
    Point(usize),
    /// A regular point of the foliation off every catalogue curve.
    Free,
}

/// The surface obtained from the top lattice by contracting `contracted`.
/// Classes on it are represented by their pullbacks, the classes
/// orthogonal to every contracted curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FoliatedSurfaceModel {
    pub base: BaseSurface,
    pub lattice: PicardLattice,
    pub k_x: DivisorClass,
    pub k_f: DivisorClass,
    pub curves: Vec<CatalogueCurve>,
    pub points: Vec<MarkedPoint>,
    pub boundary: Vec<BoundaryComponent>,
    /// A declared fibration class, if the surface is known to fiber.
    pub fibration: Option<DivisorClass>,
    /// Declared hypotheses that cannot be checked from the catalogue.
    pub flags: BTreeSet<String>,
    /// Contracted curves, in contraction order.
    pub contracted: Vec<usize>,
}

impl FoliatedSurfaceModel {
    pub fn new(base: BaseSurface, k_f: DivisorClass) -> Result<Self> {
        let lattice = base.lattice();
        check_rank(&lattice, &k_f)?;
        Ok(Self {
            base,
            k_x: base.canonical(),
            lattice,
            k_f,
            curves: Vec::new(),
            points: Vec::new(),
            boundary: Vec::new(),
            fibration: None,
            flags: BTreeSet::new(),
            contracted: Vec::new(),
        })
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank() - self.contracted.len()
    }

    pub fn curve_index(&self, name: &str) -> Option<usize> {
        self.curves.iter().position(|c| c.name == name)
    }

    pub fn point_index(&self, name: &str) -> Option<usize> {
        self.points.iter().position(|p| p.name == name)
    }

    pub fn is_contracted(&self, curve: usize) -> bool {
        self.contracted.contains(&curve)
    }

    pub fn add_curve(
        &mut self,
        name: &str,
        class: DivisorClass,
        invariant: bool,
        genus: u32,
    ) -> Result<usize> {
        check_name(name)?;
        if self.curve_index(name).is_some() {
            return Err(Error::InvalidInput(format!("duplicate curve {name}")));
        }
        check_rank(&self.lattice, &class)?;
        self.curves.push(CatalogueCurve {
            name: name.into(),
            class,
            invariant,
            genus,
        });
        Ok(self.curves.len() - 1)
    }

    /// Adds a marked point; each branch must pass through it and agree with
    /// its curve's invariance flag.
    pub fn add_point(&mut self, name: &str, germ: VectorFieldGerm, branches: Vec<Branch>) -> Result<usize> {
        check_name(name)?;
        if self.point_index(name).is_some() {
            return Err(Error::InvalidInput(format!("duplicate point {name}")));
        }
        let germ = germ.saturate();
        let mut seen = BTreeSet::new();
        for b in &branches {
            let curve = self
                .curves
                .get(b.curve)
                .ok_or_else(|| Error::InvalidInput(format!("point {name}: unknown curve")))?;
            if !seen.insert(b.curve) {
                return Err(Error::InvalidInput(format!(
                    "point {name}: several branches of {} are not supported",
                    curve.name
                )));
            }
            if !b.equation.vanishes_at_origin() {
                return Err(Error::InvalidInput(format!(
                    "point {name}: branch of {} does not pass through the point",
                    curve.name
                )));
            }
            if germ.leaves_invariant(&b.equation) != curve.invariant {
                return Err(Error::InvalidInput(format!(
                    "point {name}: invariance of {} disagrees with the germ",
                    curve.name
                )));
            }
        }
        self.points.push(MarkedPoint {
            name: name.into(),
            germ,
            branches,
        });
        Ok(self.points.len() - 1)
    }

    pub fn set_boundary(&mut self, curve: usize, coefficient: Rational) -> Result<()> {
        if curve >= self.curves.len() {
            return Err(Error::InvalidInput("boundary on an unknown curve".into()));
        }
        if coefficient.is_negative() || coefficient > Rational::one() {
            return Err(Error::InvalidInput(format!(
                "boundary coefficient {coefficient} outside [0, 1]"
            )));
        }
        self.boundary.retain(|b| b.curve != curve);
        if !coefficient.is_zero() {
            self.boundary.push(BoundaryComponent { curve, coefficient });
            self.boundary.sort_by_key(|b| b.curve);
        }
        Ok(())
    }

    pub fn boundary_coefficient(&self, curve: usize) -> Rational {
        self.boundary
            .iter()
            .find(|b| b.curve == curve)
            .map(|b| b.coefficient.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn intersect(&self, a: &DivisorClass, b: &DivisorClass) -> Result<Rational> {
        self.lattice.intersect(a, b)
    }

    /// `(K_F + Δ_n-inv, K_X + Δ)` on the top surface, with `Δ` the boundary
    /// on curves that are not contracted.
    pub fn log_canonical_parts(&self) -> (DivisorClass, DivisorClass) {
        let mut fol = self.k_f.clone();
        let mut var = self.k_x.clone();
        for b in &self.boundary {
            if self.is_contracted(b.curve) {
                continue;
            }
            let d = self.curves[b.curve].class.scale(&b.coefficient);
            if !self.curves[b.curve].invariant {
                fol = &fol + &d;
            }
            var = &var + &d;
        }
        (fol, var)
    }

    /// `K_{(X,F,Δ),ε} = (K_F + Δ_n-inv) + ε(K_X + Δ)` on the current surface.
    pub fn adjoint_class(&self, epsilon: &Rational) -> Result<DivisorClass> {
        let (fol, var) = self.log_canonical_parts();
        self.pull_back_current(&(&fol + &var.scale(epsilon)))
    }

    /// The pullback of the image of `d` on the current surface.
    pub fn pull_back_current(&self, d: &DivisorClass) -> Result<DivisorClass> {
        super::contract::Contraction::of(self, &self.contracted)?.push(&self.lattice, d)
    }

    /// The class of the image of a catalogue curve, pulled back.
    pub fn current_class(&self, curve: usize) -> Result<DivisorClass> {
        self.pull_back_current(&self.curves[curve].class)
    }

    /// Boundary branches through a marked point, for the local checks.
    pub fn boundary_branches_at(&self, point: usize) -> Vec<BoundaryBranch> {
        self.points[point]
            .branches
            .iter()
            .filter(|b| !self.is_contracted(b.curve))
            .filter_map(|b| {
                let c = self.boundary_coefficient(b.curve);
                (!c.is_zero()).then(|| BoundaryBranch {
                    equation: b.equation.clone(),
                    coefficient: c,
                    invariant: self.curves[b.curve].invariant,
                })
            })
            .collect()
    }

    /// Checks the index formulas on every catalogue curve and the pairwise
    /// intersection numbers against the marked points. Returns the
    /// discrepancies found; an empty list means the catalogue is consistent.
    pub fn incidence_report(&self) -> Result<Vec<String>> {
        let mut issues = Vec::new();
        for (i, c) in self.curves.iter().enumerate() {
            let branches: Vec<(&MarkedPoint, &Branch)> = self
                .points
                .iter()
                .flat_map(|p| {
                    p.branches
                        .iter()
                        .filter(move |b| b.curve == i)
                        .map(move |b| (p, b))
                })
                .collect();
            if branches.iter().any(|(_, b)| b.equation.order().ok() != Some(1)) {
                issues.push(format!("{}: singular branch, index formula not checked", c.name));
                continue;
            }
            let kf = self.intersect(&self.k_f, &c.class)?;
            let sq = self.intersect(&c.class, &c.class)?;
            let mut count = 0u32;
            for (p, b) in &branches {
                count += if c.invariant {
                    zero_order(&p.germ, &b.equation)?
                } else {
                    tangency_order(&p.germ, &b.equation)?
                };
            }
            let expected = if c.invariant {
                kf + Rational::from_integer((2 - 2 * c.genus as i64).into())
            } else {
                kf + sq
            };
            if expected != Rational::from_integer(count.into()) {
                let what = if c.invariant { "zeros" } else { "tangencies" };
                issues.push(format!(
                    "{}: index formula expects {expected} {what}, marked points carry {count}",
                    c.name
                ));
            }
        }
        for i in 0..self.curves.len() {
            for j in i + 1..self.curves.len() {
                let global = self.intersect(&self.curves[i].class, &self.curves[j].class)?;
                let mut local = 0u32;
                for p in &self.points {
                    let bi = p.branches.iter().find(|b| b.curve == i);
                    let bj = p.branches.iter().find(|b| b.curve == j);
                    if let (Some(bi), Some(bj)) = (bi, bj) {
                        local += intersection_multiplicity(&bi.equation, &bj.equation)?;
                    }
                }
                if global != Rational::from_integer(local.into()) {
                    issues.push(format!(
                        "{}.{} = {global}, marked points account for {local}",
                        self.curves[i].name, self.curves[j].name
                    ));
                }
            }
        }
        Ok(issues)
    }

    fn fresh_exceptional_label(&self) -> String {
        (1..)
            .map(|k| format!("E{k}"))
            .find(|l| self.lattice.index_of(l).is_none() && self.curve_index(l).is_none())
            .expect("unbounded label supply")
    }
}

/// Blows up a point: the lattice gains `E` with `E² = -1`, `K_X` pulls back
/// plus `E`, `K_F` plus `a E` with `a` the germ's discrepancy, curves
/// through the center lose their multiplicity times `E`, and the special
/// points of `E` and its meetings with strict transforms become marked
/// points named `E<k>[t=...]`.
pub fn blow_up_model(model: &FoliatedSurfaceModel, center: &BlowUpCenter) -> Result<FoliatedSurfaceModel> {
    if !model.contracted.is_empty() {
        return Err(Error::Precondition(
            "blow-ups are only supported before contractions".into(),
        ));
    }
    let mut m = model.clone();
    let point = match center {
        BlowUpCenter::Point(i) => {
            if *i >= m.points.len() {
                return Err(Error::InvalidInput("unknown blow-up center".into()));
            }
            m.points.remove(*i)
        }
        BlowUpCenter::Free => MarkedPoint {
            name: "free".into(),
            germ: VectorFieldGerm::regular(),
            branches: Vec::new(),
        },
    };
    let bu = point.germ.blow_up()?;
    let label = m.fresh_exceptional_label();
    let e_idx = m.lattice.blow_up(&label)?;
    let mut classes: Vec<&mut DivisorClass> = vec![&mut m.k_x, &mut m.k_f];
    classes.extend(m.curves.iter_mut().map(|c| &mut c.class));
    if let Some(f) = m.fibration.as_mut() {
        classes.push(f);
    }
    for c in classes {
        c.extend();
    }
    let e = m.lattice.basis(e_idx);
    m.k_x = &m.k_x + &e;
    m.k_f = &m.k_f + &e.scale(&bu.foliation_discrepancy);
    for b in &point.branches {
        let mult = Rational::from_integer(b.equation.order()?.into());
        let c = &mut m.curves[b.curve];
        c.class = &c.class - &e.scale(&mult);
    }
    let e_curve = m.add_curve(&label, e.clone(), bu.iota == 0, 0)?;

    let (mut centers, rest) = special_points(&bu)?;
    if rest.degree().unwrap_or(0) > 0 {
        return Err(Error::NonRationalPoint(format!(
            "special points of {label} at the roots of {rest}"
        )));
    }
    for b in &point.branches {
        let st = strict_transform(&b.equation, Chart::First);
        let on_e = st.restrict_x_zero();
        if on_e.degree().unwrap_or(0) > 0 {
            let (roots, rest) = on_e.rational_roots()?;
            if rest.degree().unwrap_or(0) > 0 {
                return Err(Error::NonRationalPoint(format!(
                    "{} meets {label} at the roots of {rest}",
                    m.curves[b.curve].name
                )));
            }
            centers.extend(roots.into_iter().map(|(t, _)| ExceptionalPoint::first(t)));
        }
        if strict_transform(&b.equation, Chart::Second)
            .constant_term()
            .is_zero()
        {
            centers.insert(ExceptionalPoint::at_infinity());
        }
    }
    let zero = Rational::zero();
    for p in centers {
        let mut branches = vec![Branch {
            curve: e_curve,
            equation: BivariatePolynomial::x(),
        }];
        for b in &point.branches {
            let local = strict_transform(&b.equation, p.chart).translate(&zero, &p.t);
            if local.vanishes_at_origin() {
                branches.push(Branch {
                    curve: b.curve,
                    equation: local,
                });
            }
        }
        m.add_point(&format!("{label}[{p}]"), bu.germ_at(&p), branches)?;
    }
    Ok(m)
}

fn check_rank(lattice: &PicardLattice, c: &DivisorClass) -> Result<()> {
    if c.coeffs.len() != lattice.rank() {
        return Err(Error::LatticeMismatch {
            expected: lattice.rank(),
            found: c.coeffs.len(),
        });
    }
    Ok(())
}

fn check_name(name: &str) -> Result<()> {
    if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == ';') {
        return Err(Error::InvalidInput(format!("bad name {name:?}")));
    }
    Ok(())
}
