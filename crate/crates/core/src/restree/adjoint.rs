//! Bounded search for (ε,δ)-adjoint log canonicity of a germ.
//!
//! Every divisor over the origin must satisfy
//! `a_fol + ε a_var >= (ι + ε)(δ - 1)`. The search blows up breadth-first
//! and stops exploring a point once a local bound shows that no divisor
//! over it can violate the inequality:
//!
//! * at a regular point whose curves are at most one leaf `L` and one
//!   transverse curve `T`, every divisor over it has value at least
//!   `α c_T + β c_L - ε` with `α, β >= 1`, where `c_T = 1 + ε + v_T` and
//!   `c_L = ε + v_L`;
//! * at a reduced singular point with at most two smooth transverse curves
//!   the same holds with `c_i = ε + v_i`, since `a_fol >= 0` there.
//!
//! `v` is the value `a_fol + ε a_var` carried by a curve (exceptional
//! divisors) or `-c (1[non-invariant] + ε)` (boundary branches). Divisors
//! over such points are invariant, and `-ε(1 - δ)` bounds every threshold
//! from above, so the prune is sound for any ι.

use std::cmp::Ordering;
use std::collections::VecDeque;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::site::{special_points, Site, SiteCurve, WeightedBranch};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::germ::{BoundaryBranch, ExceptionalPoint, VectorFieldGerm};

pub const DEFAULT_SEARCH_DEPTH: usize = 8;
pub const DEFAULT_NODE_LIMIT: usize = 20_000;
const THRESHOLD_ITERATIONS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjointParams {
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub epsilon: Rational,
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub delta: Rational,
    pub search_depth: usize,
    pub node_limit: usize,
}

impl AdjointParams {
    pub fn new(epsilon: Rational, delta: Rational) -> Self {
        Self {
            epsilon,
            delta,
            search_depth: DEFAULT_SEARCH_DEPTH,
            node_limit: DEFAULT_NODE_LIMIT,
        }
    }

    pub fn with_depth(mut self, depth: usize) -> Self {
        self.search_depth = depth;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.epsilon.is_positive() {
            return Err(Error::Precondition("epsilon must be positive".into()));
        }
        check_delta(&self.delta)?;
        if self.search_depth < 4 {
            return Err(Error::Precondition("search depth must be at least 4".into()));
        }
        Ok(())
    }
}

fn check_delta(delta: &Rational) -> Result<()> {
    if delta.is_negative() || *delta > Rational::one() {
        return Err(Error::Precondition("delta must lie in [0, 1]".into()));
    }
    Ok(())
}

/// `c0 + c1 ε`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Affine {
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub c0: Rational,
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub c1: Rational,
}

impl Affine {
    pub fn new(c0: Rational, c1: Rational) -> Self {
        Self { c0, c1 }
    }

    fn add(&self, o: &Affine) -> Affine {
        Affine::new(&self.c0 + &o.c0, &self.c1 + &o.c1)
    }

    fn sub(&self, o: &Affine) -> Affine {
        Affine::new(&self.c0 - &o.c0, &self.c1 - &o.c1)
    }

    pub fn sign(&self, mode: &EpsilonMode) -> Ordering {
        match mode {
            EpsilonMode::Value(e) => (&self.c0 + &self.c1 * e).cmp(&Rational::zero()),
            EpsilonMode::Infinitesimal => match self.c0.cmp(&Rational::zero()) {
                Ordering::Equal => self.c1.cmp(&Rational::zero()),
                o => o,
            },
        }
    }

    fn ge(&self, o: &Affine, mode: &EpsilonMode) -> bool {
        self.sub(o).sign(mode) != Ordering::Less
    }
}

/// How `ε` is evaluated: a concrete value, or the limit `ε -> 0+`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EpsilonMode {
    Value(Rational),
    Infinitesimal,
}

/// A divisor violating the adjoint inequality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Blow-up centers after the first, which is the origin.
    pub path: Vec<ExceptionalPoint>,
    pub iota: u8,
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub a_fol: Rational,
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub a_var: Rational,
}

impl Witness {
    /// Number of blow-ups producing the divisor.
    pub fn depth(&self) -> usize {
        self.path.len() + 1
    }

    /// `a_fol + ε a_var - (ι + ε)(δ - 1)`
    pub fn margin(&self, epsilon: &Rational, delta: &Rational) -> Rational {
        let iota = Rational::from_integer(self.iota.into());
        &self.a_fol + epsilon * &self.a_var - (iota + epsilon) * (delta - Rational::one())
    }

    /// Smallest `ε` at which this divisor stops violating, when the
    /// constraint is a lower bound on `ε`.
    pub fn epsilon_bound(&self, delta: &Rational) -> Option<Rational> {
        let one_minus = Rational::one() - delta;
        let a = &self.a_fol + Rational::from_integer(self.iota.into()) * &one_minus;
        let b = &self.a_var + &one_minus;
        b.is_positive().then(|| -a / b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AdjointVerdict {
    Certified,
    Refuted(Witness),
    Inconclusive(String),
}

impl AdjointVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            AdjointVerdict::Certified => "Certified",
            AdjointVerdict::Refuted(_) => "Refuted",
            AdjointVerdict::Inconclusive(_) => "Inconclusive",
        }
    }
}

/// Decides `(ε,δ)`-adjoint log canonicity of the germ with the given
/// boundary branches at the origin.
pub fn adjoint_lc_check(
    g: &VectorFieldGerm,
    boundary: &[BoundaryBranch],
    params: &AdjointParams,
) -> Result<AdjointVerdict> {
    params.validate()?;
    search(
        g,
        boundary,
        &params.delta,
        &EpsilonMode::Value(params.epsilon.clone()),
        params.search_depth,
        params.node_limit,
    )
}

/// As [`adjoint_lc_check`], at a point lying on divisors that are already
/// exceptional over it (the curves of a contracted configuration).
pub fn adjoint_lc_check_with(
    g: &VectorFieldGerm,
    boundary: &[BoundaryBranch],
    exceptional: &[WeightedBranch],
    params: &AdjointParams,
) -> Result<AdjointVerdict> {
    params.validate()?;
    run_search(
        Site::root_with(g.clone(), boundary, exceptional),
        &params.delta,
        &EpsilonMode::Value(params.epsilon.clone()),
        params.search_depth,
        params.node_limit,
    )
}

/// Runs the bounded search in the given epsilon mode.
pub fn search(
    g: &VectorFieldGerm,
    boundary: &[BoundaryBranch],
    delta: &Rational,
    mode: &EpsilonMode,
    max_depth: usize,
    node_limit: usize,
) -> Result<AdjointVerdict> {
    run_search(
        Site::root(g.clone(), boundary),
        delta,
        mode,
        max_depth,
        node_limit,
    )
}

fn run_search(
    root: Site,
    delta: &Rational,
    mode: &EpsilonMode,
    max_depth: usize,
    node_limit: usize,
) -> Result<AdjointVerdict> {
    let thr0 = Affine::new(Rational::zero(), delta - Rational::one());
    let mut queue = VecDeque::new();
    queue.push_back(root);
    let mut inconclusive: Option<String> = None;
    let mut divisors = 0usize;
    let mut processed = 0usize;

    while let Some(site) = queue.pop_front() {
        processed += 1;
        if processed > node_limit {
            return Ok(AdjointVerdict::Inconclusive(format!(
                "node limit {node_limit} reached"
            )));
        }
        if prunable(&site, &thr0, mode) {
            continue;
        }
        if site.depth >= max_depth {
            inconclusive.get_or_insert_with(|| format!("search depth {max_depth} reached"));
            continue;
        }
        let bu = site.blow_up()?;
        divisors += 1;
        let value = Affine::new(bu.a_fol.clone(), bu.a_var.clone());
        let iota = Rational::from_integer(bu.iota.into());
        let threshold = Affine::new(&iota * &thr0.c1, thr0.c1.clone());
        if !value.ge(&threshold, mode) {
            return Ok(AdjointVerdict::Refuted(Witness {
                path: site.path.clone(),
                iota: bu.iota,
                a_fol: bu.a_fol,
                a_var: bu.a_var,
            }));
        }

        let (mut points, rest) = special_points(&bu.result)?;
        if rest.degree().unwrap_or(0) > 0 {
            inconclusive
                .get_or_insert_with(|| format!("special points of E at the irrational roots of {rest}"));
        }
        let (curve_points, irrational) = site.curve_points();
        if irrational {
            inconclusive.get_or_insert_with(|| "a curve meets E at an irrational point".into());
        }
        points.extend(curve_points);

        // all other points of E look alike; one representative decides them
        let generic = (0i64..)
            .map(|n| ExceptionalPoint::first(Rational::from_integer(n.into())))
            .find(|p| !points.contains(p))
            .expect("finitely many special points");
        let generic_site = site.child(&bu, divisors, &generic);
        if !prunable(&generic_site, &thr0, mode) {
            queue.push_back(generic_site);
        }
        for p in &points {
            queue.push_back(site.child(&bu, divisors, p));
        }
    }
    Ok(match inconclusive {
        Some(reason) => AdjointVerdict::Inconclusive(reason),
        None => AdjointVerdict::Certified,
    })
}

fn curve_value(c: &SiteCurve) -> Affine {
    let m = Rational::from_integer(c.multiplicity().into());
    Affine::new(&c.weight.0 * &m, &c.weight.1 * &m)
}

fn prunable(site: &Site, thr0: &Affine, mode: &EpsilonMode) -> bool {
    if site.curves.iter().any(|c| c.multiplicity() != 1) {
        return false;
    }
    let eps = Affine::new(Rational::zero(), Rational::one());
    let g = &site.germ;
    let (c1, c2) = if !g.is_singular() {
        let mut leaf = None;
        let mut transverse = None;
        for c in &site.curves {
            let slot = if c.invariant {
                &mut leaf
            } else {
                if !g.is_transverse_to(&c.equation) {
                    return false;
                }
                &mut transverse
            };
            if slot.is_some() {
                return false;
            }
            *slot = Some(curve_value(c));
        }
        let one_eps = Affine::new(Rational::one(), Rational::one());
        let c_t = one_eps.add(&transverse.unwrap_or(Affine::new(Rational::zero(), Rational::zero())));
        let c_l = eps.add(&leaf.unwrap_or(Affine::new(Rational::zero(), Rational::zero())));
        (c_t, c_l)
    } else if g.linear_part().is_reduced() {
        if site.curves.len() > 2 {
            return false;
        }
        if site.curves.len() == 2 {
            let l1 = site.curves[0].equation.homogeneous_part(1);
            let l2 = site.curves[1].equation.homogeneous_part(1);
            let det = l1.coeff(1, 0) * l2.coeff(0, 1) - l1.coeff(0, 1) * l2.coeff(1, 0);
            if det.is_zero() {
                return false;
            }
        }
        let mut cs = site.curves.iter().map(|c| eps.add(&curve_value(c)));
        let c1 = cs.next().unwrap_or_else(|| eps.clone());
        let c2 = cs.next().unwrap_or_else(|| eps.clone());
        (c1, c2)
    } else {
        return false;
    };
    let zero = Affine::new(Rational::zero(), Rational::zero());
    c1.ge(&zero, mode) && c2.ge(&zero, mode) && c1.add(&c2).sub(&eps).ge(thr0, mode)
}

/// Where certification starts, as `ε` grows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AdjointThreshold {
    /// Certified for every `ε > 0`: no divisor constrains `ε`.
    Unbounded,
    /// Certified exactly for `ε >= t`.
    Finite(#[serde(with = "crate::exact::rational::serde_rational")] Rational),
}

/// The exact `ε` at which certification starts, from the witnesses found
/// along the way: each refutation raises the candidate to the largest
/// `-A/B` with `A = a_fol + ι(1 - δ)` and `B = a_var + 1 - δ`.
pub fn adjoint_threshold(
    g: &VectorFieldGerm,
    boundary: &[BoundaryBranch],
    delta: &Rational,
    depth: usize,
) -> Result<AdjointThreshold> {
    check_delta(delta)?;
    let mut t = match search(
        g,
        boundary,
        delta,
        &EpsilonMode::Infinitesimal,
        depth,
        DEFAULT_NODE_LIMIT,
    )? {
        AdjointVerdict::Certified => return Ok(AdjointThreshold::Unbounded),
        AdjointVerdict::Inconclusive(r) => return Err(Error::Inconclusive(r)),
        AdjointVerdict::Refuted(w) => lower_bound(&w, delta)?,
    };
    for _ in 0..THRESHOLD_ITERATIONS {
        let mode = EpsilonMode::Value(t.clone());
        match search(g, boundary, delta, &mode, depth, DEFAULT_NODE_LIMIT)? {
            AdjointVerdict::Certified => return Ok(AdjointThreshold::Finite(t)),
            AdjointVerdict::Inconclusive(r) => return Err(Error::Inconclusive(r)),
            AdjointVerdict::Refuted(w) => {
                let next = lower_bound(&w, delta)?;
                if next <= t {
                    return Err(Error::Inconclusive("threshold iteration did not advance".into()));
                }
                t = next;
            }
        }
    }
    Err(Error::Inconclusive(format!(
        "threshold not reached after {THRESHOLD_ITERATIONS} refinements"
    )))
}

fn lower_bound(w: &Witness, delta: &Rational) -> Result<Rational> {
    w.epsilon_bound(delta)
        .ok_or_else(|| Error::Inconclusive("a violated constraint is not a lower bound on epsilon".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    fn germ(s: &str) -> VectorFieldGerm {
        VectorFieldGerm::parse(s).unwrap()
    }

    fn check(s: &str, eps: Rational, delta: Rational) -> AdjointVerdict {
        adjoint_lc_check(&germ(s), &[], &AdjointParams::new(eps, delta)).unwrap()
    }

    #[test]
    fn saddle_is_certified() {
        assert_eq!(
            check("dx: x, dy: -y", rat(1, 10), int(1)),
            AdjointVerdict::Certified
        );
        assert_eq!(
            check("dx: 1, dy: 0", rat(1, 10), int(1)),
            AdjointVerdict::Certified
        );
    }

    #[test]
    fn cusp_is_refuted_at_small_epsilon() {
        match check("dx: y, dy: x^2", rat(1, 10), int(0)) {
            AdjointVerdict::Refuted(w) => {
                assert!(w.depth() <= 4);
                assert!(w.a_fol <= -Rational::from_integer((w.iota as i64 + 1).into()));
                assert!(w.a_var <= int(4));
                assert!(w.margin(&rat(1, 10), &int(0)).is_negative());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn strictly_lc_threshold() {
        let g = VectorFieldGerm::linear_diagonal(2, 3);
        assert_eq!(
            adjoint_threshold(&g, &[], &int(1), 8).unwrap(),
            AdjointThreshold::Finite(rat(1, 4))
        );
        let p = |e| adjoint_lc_check(&g, &[], &AdjointParams::new(e, int(1))).unwrap();
        assert_eq!(p(rat(1, 4)), AdjointVerdict::Certified);
        assert!(matches!(p(rat(1, 5)), AdjointVerdict::Refuted(_)));
    }

    #[test]
    fn saddle_threshold_unbounded() {
        assert_eq!(
            adjoint_threshold(&germ("dx: x, dy: -y"), &[], &int(1), 8).unwrap(),
            AdjointThreshold::Unbounded
        );
    }

    #[test]
    fn rejects_bad_params() {
        let g = germ("dx: x, dy: -y");
        assert!(adjoint_lc_check(&g, &[], &AdjointParams::new(int(0), int(1))).is_err());
        assert!(adjoint_lc_check(&g, &[], &AdjointParams::new(rat(1, 10), int(2))).is_err());
        assert!(adjoint_lc_check(&g, &[], &AdjointParams::new(rat(1, 10), int(1)).with_depth(3)).is_err());
    }
}
