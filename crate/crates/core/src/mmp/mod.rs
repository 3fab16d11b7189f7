//! The `K_{(X,F,Δ),ε}`-MMP on catalogue models, the ε-adjoint canonical
//! model, and the arithmetic bounds.
//!
//! Negativity, nefness and pseudoeffectivity are all relative to the curve
//! catalogue.

mod bounds;
mod check;
mod log;

pub use bounds::{
    automorphism_bound, automorphism_bound_from_floor, degree_bound_check, ConstantEntry, ConstantsTable,
    DegreeBoundReport, CONSTANT_NAMES,
};
pub use check::{check_annotations, eta_bound, AnnotationCheck};
pub use log::{canonical_log, run_log, LOG_FORMAT, LOG_VERSION};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{rat, Rational};
use crate::restree::{classify, AdjointParams, AdjointVerdict, SingularityClass};
use crate::surface::{DivisorClass, FoliatedSurfaceModel, SingularPoint, SurfacePointKind};

/// MMP entry points need `ε` below this.
pub fn epsilon_ceiling() -> Rational {
    rat(1, 5)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ZeroCase {
    /// `(K_F + Δ_n-inv)·C < 0`
    I,
    /// `(K_X + Δ)·C < 0`
    II,
    /// both vanish; contracted as `K_X + Δ + tC`-negative
    III,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RayType {
    FoliationNegative,
    VarietyNegative,
    AdjointZero(ZeroCase),
}

impl RayType {
    pub fn name(&self) -> String {
        match self {
            RayType::FoliationNegative => "FoliationNegative".into(),
            RayType::VarietyNegative => "VarietyNegative".into(),
            RayType::AdjointZero(c) => format!(
                "AdjointZero({})",
                match c {
                    ZeroCase::I => "i",
                    ZeroCase::II => "ii",
                    ZeroCase::III => "iii",
                }
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MMPStep {
    pub curve: usize,
    pub name: String,
    pub ray: RayType,
    /// `C²` on the surface before the step.
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub self_intersection: Rational,
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub foliation_degree: Rational,
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub variety_degree: Rational,
    /// Adjoint degree of `C` before the step.
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub degree_before: Rational,
    /// Adjoint degree of `C` against the class pulled back from the
    /// contracted surface; zero by construction.
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub degree_after: Rational,
    /// Coefficient of `C` in `K_before - f*K_after`.
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub coefficient: Rational,
    /// Case (iii) only: the `t` with `(K_X + Δ + tC)·C < 0`.
    #[serde(with = "crate::exact::rational::serde_rational::option")]
    pub perturbation: Option<Rational>,
    pub rank_after: usize,
    pub singular_point: SingularPoint,
    pub checks: Vec<AnnotationCheck>,
}

impl MMPStep {
    /// Every annotation passed after the step.
    pub fn preserved(&self) -> bool {
        self.checks.iter().all(AnnotationCheck::passed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum MMPOutcome {
    /// No catalogue curve is adjoint-negative.
    NefModel,
    /// The adjoint class is negative on the fibers of `fibration`, or on
    /// every curve of a Picard rank one surface when `fibration` is `None`.
    MoriFiberSpace { fibration: Option<DivisorClass> },
    /// A foliation-negative curve passes through a strictly log canonical
    /// point, so it moves and `K_F + Δ_n-inv` is not pseudoeffective.
    NotPseudoeffective { curve: usize, point: String },
}

impl MMPOutcome {
    pub fn name(&self) -> &'static str {
        match self {
            MMPOutcome::NefModel => "NefModel",
            MMPOutcome::MoriFiberSpace { .. } => "MoriFiberSpace",
            MMPOutcome::NotPseudoeffective { .. } => "NotPseudoeffective",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MMPResult {
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub epsilon: Rational,
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub delta: Rational,
    pub initial_rank: usize,
    pub steps: Vec<MMPStep>,
    pub outcome: MMPOutcome,
    pub model: FoliatedSurfaceModel,
    pub initial_checks: Vec<AnnotationCheck>,
}

struct Degrees {
    fol: Rational,
    var: Rational,
    adj: Rational,
    square: Rational,
}

fn degrees(m: &FoliatedSurfaceModel, curve: usize, epsilon: &Rational) -> Result<Degrees> {
    let (fol, var) = m.log_canonical_parts();
    let c = m.current_class(curve)?;
    let fol = m.intersect(&fol, &c)?;
    let var = m.intersect(&var, &c)?;
    Ok(Degrees {
        adj: &fol + epsilon * &var,
        square: m.intersect(&c, &c)?,
        fol,
        var,
    })
}

fn check_preconditions(model: &FoliatedSurfaceModel, params: &AdjointParams) -> Result<()> {
    params.validate()?;
    if params.epsilon >= epsilon_ceiling() {
        return Err(Error::Precondition(format!(
            "epsilon = {} must be below 1/5",
            params.epsilon
        )));
    }
    let cap = Rational::one() - &params.delta;
    for b in &model.boundary {
        if b.coefficient > cap {
            return Err(Error::Precondition(format!(
                "boundary coefficient {} of {} exceeds 1 - delta = {cap}",
                b.coefficient, model.curves[b.curve].name
            )));
        }
    }
    for p in &model.points {
        match classify(&p.germ) {
            SingularityClass::Terminal
            | SingularityClass::Canonical { .. }
            | SingularityClass::StrictlyLogCanonical { .. } => {}
            other => {
                return Err(Error::Precondition(format!("point {} is {other}", p.name)));
            }
        }
    }
    Ok(())
}

fn require_checks(checks: &[AnnotationCheck]) -> Result<()> {
    for c in checks {
        match &c.verdict {
            AdjointVerdict::Certified => {}
            AdjointVerdict::Refuted(w) => {
                return Err(Error::Precondition(format!(
                "{} is not (epsilon, delta)-adjoint log canonical: divisor with iota {}, a_fol {}, a_var {}",
                c.site, w.iota, w.a_fol, w.a_var
            )))
            }
            AdjointVerdict::Inconclusive(r) => {
                return Err(Error::Inconclusive(format!("{}: {r}", c.site)));
            }
        }
    }
    Ok(())
}

fn strictly_lc_point_on(m: &FoliatedSurfaceModel, curve: usize) -> Option<String> {
    m.points
        .iter()
        .filter(|p| p.branches.iter().any(|b| b.curve == curve))
        .find(|p| matches!(classify(&p.germ), SingularityClass::StrictlyLogCanonical { .. }))
        .map(|p| p.name.clone())
}

/// Contracts `curve` and records the step.
fn contract_step(
    m: &mut FoliatedSurfaceModel,
    curve: usize,
    ray: RayType,
    d: Degrees,
    perturbation: Option<Rational>,
    params: &AdjointParams,
) -> Result<MMPStep> {
    let c_top = m.curves[curve].class.clone();
    m.contract(curve)?;
    let after = m.adjoint_class(&params.epsilon)?;
    let degree_after = m.intersect(&after, &c_top)?;
    let singular_point = m
        .singular_points()?
        .into_iter()
        .find(|sp| sp.curves.contains(&curve))
        .expect("contracted curve lies in a configuration");
    Ok(MMPStep {
        curve,
        name: m.curves[curve].name.clone(),
        ray,
        coefficient: &d.adj / &d.square,
        self_intersection: d.square,
        foliation_degree: d.fol,
        variety_degree: d.var,
        degree_before: d.adj,
        degree_after,
        perturbation,
        rank_after: m.rank(),
        singular_point,
        checks: check_annotations(m, params)?,
    })
}

/// Runs the MMP: repeatedly contracts an adjoint-negative catalogue curve
/// of negative square, foliation-negative invariant curves first, then
/// variety-negative ones, then the rest, by catalogue index.
pub fn run_adjoint_mmp(model: &FoliatedSurfaceModel, params: &AdjointParams) -> Result<MMPResult> {
    check_preconditions(model, params)?;
    let initial_checks = check_annotations(model, params)?;
    require_checks(&initial_checks)?;
    let eps = &params.epsilon;
    let mut m = model.clone();
    let mut steps = Vec::new();
    let initial_rank = m.rank();

    let outcome = loop {
        let mut candidates = Vec::new();
        let mut nonnegative_square = Vec::new();
        for i in 0..m.curves.len() {
            if m.is_contracted(i) {
                continue;
            }
            let d = degrees(&m, i, eps)?;
            if !d.adj.is_negative() {
                continue;
            }
            if d.square.is_negative() {
                let priority = if m.curves[i].invariant && d.fol.is_negative() {
                    0
                } else if d.var.is_negative() {
                    1
                } else {
                    2
                };
                candidates.push((priority, i, d));
            } else {
                nonnegative_square.push(i);
            }
        }
        candidates.sort_by_key(|(p, i, _)| (*p, *i));
        if let Some((_, curve, d)) = candidates.into_iter().next() {
            let ray = if d.fol.is_negative() {
                RayType::FoliationNegative
            } else {
                RayType::VarietyNegative
            };
            if ray == RayType::FoliationNegative {
                if let Some(point) = strictly_lc_point_on(&m, curve) {
                    break MMPOutcome::NotPseudoeffective { curve, point };
                }
            }
            steps.push(contract_step(&mut m, curve, ray, d, None, params)?);
            continue;
        }
        let adj = m.adjoint_class(eps)?;
        if let Some(f) = &m.fibration {
            let f = m.pull_back_current(f)?;
            if m.intersect(&f, &f)?.is_zero() && m.intersect(&adj, &f)?.is_negative() {
                break MMPOutcome::MoriFiberSpace { fibration: Some(f) };
            }
        }
        if let Some(&i) = nonnegative_square.first() {
            if m.rank() == 1 {
                break MMPOutcome::MoriFiberSpace { fibration: None };
            }
            return Err(Error::CatalogueIncomplete(format!(
                "{} is adjoint-negative with nonnegative square and no fibration is declared",
                m.curves[i].name
            )));
        }
        break MMPOutcome::NefModel;
    };

    Ok(MMPResult {
        epsilon: params.epsilon.clone(),
        delta: params.delta.clone(),
        initial_rank,
        steps,
        outcome,
        model: m,
        initial_checks,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalModel {
    pub model: FoliatedSurfaceModel,
    pub steps: Vec<MMPStep>,
    /// The adjoint class is positive on every remaining catalogue curve.
    pub positive_on_catalogue: bool,
}

/// The simplest rational in the open interval `(0, hi)`, `hi > 0`.
fn simplest_below(hi: &Rational) -> Rational {
    let mut q = 1i64;
    loop {
        let t = rat(1, q);
        if &t < hi {
            return t;
        }
        q += 1;
    }
}

/// Contracts the adjoint-trivial catalogue curves of negative square on a
/// nef outcome, recording which case of the trichotomy each falls in.
pub fn epsilon_canonical_model(result: &MMPResult, params: &AdjointParams) -> Result<CanonicalModel> {
    if result.outcome != MMPOutcome::NefModel {
        return Err(Error::Precondition(format!(
            "canonical model needs a nef outcome, got {}",
            result.outcome.name()
        )));
    }
    let eps = &params.epsilon;
    let mut m = result.model.clone();
    let mut steps = Vec::new();
    'outer: loop {
        for i in 0..m.curves.len() {
            if m.is_contracted(i) {
                continue;
            }
            let d = degrees(&m, i, eps)?;
            if !d.adj.is_zero() || !d.square.is_negative() {
                continue;
            }
            let (case, t) = if d.fol.is_negative() {
                if let Some(p) = strictly_lc_point_on(&m, i) {
                    return Err(Error::NotContractible(format!(
                        "{} passes through the strictly log canonical point {p} and moves",
                        m.curves[i].name
                    )));
                }
                (ZeroCase::I, None)
            } else if d.var.is_negative() {
                (ZeroCase::II, None)
            } else {
                let room = Rational::one() - m.boundary_coefficient(i);
                (ZeroCase::III, Some(simplest_below(&room)))
            };
            steps.push(contract_step(
                &mut m,
                i,
                RayType::AdjointZero(case),
                d,
                t,
                params,
            )?);
            continue 'outer;
        }
        break;
    }
    let adj = m.adjoint_class(eps)?;
    let mut positive = true;
    for i in 0..m.curves.len() {
        if !m.is_contracted(i) && !m.intersect(&adj, &m.current_class(i)?)?.is_positive() {
            positive = false;
        }
    }
    Ok(CanonicalModel {
        model: m,
        steps,
        positive_on_catalogue: positive,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaReport {
    /// Minimal `1 + a_var` over the curves of the singular points; `1` when
    /// the surface is smooth.
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub margin: Rational,
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub bound: Rational,
    pub meets_bound: bool,
    #[serde(with = "crate::exact::rational::serde_rational::vec")]
    pub per_point: Vec<Rational>,
}

pub fn eta_lc_report(
    model: &FoliatedSurfaceModel,
    epsilon: &Rational,
    delta: &Rational,
) -> Result<EtaReport> {
    let per_point: Vec<Rational> = model
        .singular_points()?
        .iter()
        .filter(|sp| sp.kind != SurfacePointKind::Smooth)
        .map(SingularPoint::log_discrepancy_margin)
        .collect();
    let margin = per_point.iter().min().cloned().unwrap_or_else(Rational::one);
    let bound = eta_bound(epsilon, delta);
    Ok(EtaReport {
        meets_bound: margin >= bound,
        margin,
        bound,
        per_point,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::surface::parse_surface;

    fn params(eps: Rational, delta: Rational) -> AdjointParams {
        AdjointParams::new(eps, delta)
    }

    const F1_FIBRATION: &str = "folmmp-surface v1
base F1
kf -2C0 - F
curve C0 C0 non-invariant
curve L F invariant
point p germ dx: 1, dy: 0 ; on L y ; on C0 x
fibration F
";

    #[test]
    fn fibration_foliation_is_a_mori_fiber_space() {
        let m = parse_surface(F1_FIBRATION).unwrap();
        let r = run_adjoint_mmp(&m, &params(rat(1, 10), int(0))).unwrap();
        assert!(r.steps.is_empty());
        match r.outcome {
            MMPOutcome::MoriFiberSpace { fibration: Some(f) } => {
                assert_eq!(m.intersect(&f, &f).unwrap(), int(0));
                let adj = m.adjoint_class(&rat(1, 10)).unwrap();
                assert_eq!(m.intersect(&adj, &f).unwrap(), rat(-2, 1) + rat(1, 10) * int(-2));
            }
            other => panic!("{other:?}"),
        }
    }

    const PLANE_DEG2_BLOWN_UP: &str = "folmmp-surface v1
base P2
kf H
point p germ dx: 1, dy: 0
blowup p
";

    #[test]
    fn exceptional_over_a_regular_point_is_contracted() {
        let m = parse_surface(PLANE_DEG2_BLOWN_UP).unwrap();
        let r = run_adjoint_mmp(&m, &params(rat(1, 10), int(0))).unwrap();
        assert_eq!(r.steps.len(), 1);
        let s = &r.steps[0];
        assert_eq!(s.name, "E1");
        assert_eq!(s.ray, RayType::FoliationNegative);
        assert_eq!(s.degree_before, rat(-11, 10));
        assert_eq!(s.degree_after, int(0));
        assert!(s.coefficient.is_positive());
        assert!(s.preserved(), "{:?}", s.checks);
        assert_eq!(r.outcome, MMPOutcome::NefModel);
        assert_eq!(r.model.rank(), 1);
    }

    #[test]
    fn nef_model_takes_no_steps() {
        let m = parse_surface("folmmp-surface v1\nbase P2\nkf H\ncurve L H non-invariant\n").unwrap();
        let r = run_adjoint_mmp(&m, &params(rat(1, 10), int(0))).unwrap();
        assert!(r.steps.is_empty());
        assert_eq!(r.outcome, MMPOutcome::NefModel);
        let c = epsilon_canonical_model(&r, &params(rat(1, 10), int(0))).unwrap();
        assert!(c.steps.is_empty());
        assert!(c.positive_on_catalogue);
    }

    #[test]
    fn preconditions() {
        let m = parse_surface(PLANE_DEG2_BLOWN_UP).unwrap();
        assert!(matches!(
            run_adjoint_mmp(&m, &params(rat(1, 5), int(0))),
            Err(Error::Precondition(_))
        ));
        let cusp = parse_surface("folmmp-surface v1\nbase P2\nkf H\npoint c germ dx: y, dy: x^2\n").unwrap();
        assert!(matches!(
            run_adjoint_mmp(&cusp, &params(rat(1, 10), int(0))),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn plane_with_radial_foliation_is_a_mori_fiber_space_over_a_point() {
        let m = parse_surface(
            "folmmp-surface v1\nbase P2\nkf -H\ncurve L H invariant\npoint p germ dx: x, dy: y ; on L y\n",
        )
        .unwrap();
        let r = run_adjoint_mmp(&m, &params(rat(1, 10), int(0))).unwrap();
        assert_eq!(r.outcome, MMPOutcome::MoriFiberSpace { fibration: None });
    }

    #[test]
    fn simplest_rationals() {
        assert_eq!(simplest_below(&int(1)), rat(1, 2));
        assert_eq!(simplest_below(&rat(1, 2)), rat(1, 3));
        assert_eq!(simplest_below(&rat(2, 3)), rat(1, 2));
    }
}
