//! Per-annotation (ε,δ)-adjoint log canonicity of a model.
//!
//! Divisors over a point of the current surface are either curves of a
//! contracted configuration, whose discrepancies come from the lattice, or
//! lie over a point of the top surface. Those over a marked point, or over
//! a general point of a contracted curve, are searched with the contracted
//! curves through the point as weighted branches.

use num_traits::One;
use serde::Serialize;

use crate::error::Result;
use crate::exact::{BivariatePolynomial, Rational};
use crate::germ::VectorFieldGerm;
use crate::restree::{adjoint_lc_check_with, AdjointParams, AdjointVerdict, WeightedBranch, Witness};
use crate::surface::FoliatedSurfaceModel;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnnotationCheck {
    /// What was checked: a contracted curve, a marked point, or the general
    /// point of a contracted curve.
    pub site: String,
    pub verdict: AdjointVerdict,
}

impl AnnotationCheck {
    pub fn passed(&self) -> bool {
        matches!(self.verdict, AdjointVerdict::Certified)
    }
}

pub fn check_annotations(
    model: &FoliatedSurfaceModel,
    params: &AdjointParams,
) -> Result<Vec<AnnotationCheck>> {
    let mut out = Vec::new();
    let mut weights: Vec<Option<(Rational, Rational)>> = vec![None; model.curves.len()];
    for sp in model.singular_points()? {
        for (k, &c) in sp.curves.iter().enumerate() {
            let w = Witness {
                path: Vec::new(),
                iota: sp.iota[k],
                a_fol: sp.a_fol[k].clone(),
                a_var: sp.a_var[k].clone(),
            };
            let verdict = if w.margin(&params.epsilon, &params.delta) >= Rational::from_integer(0.into()) {
                AdjointVerdict::Certified
            } else {
                AdjointVerdict::Refuted(w)
            };
            out.push(AnnotationCheck {
                site: format!("contracted curve {}", model.curves[c].name),
                verdict,
            });
            weights[c] = Some((sp.a_fol[k].clone(), sp.a_var[k].clone()));
        }
    }
    for (i, p) in model.points.iter().enumerate() {
        let exceptional: Vec<WeightedBranch> = p
            .branches
            .iter()
            .filter_map(|b| {
                weights[b.curve].as_ref().map(|(f, v)| WeightedBranch {
                    equation: b.equation.clone(),
                    invariant: model.curves[b.curve].invariant,
                    a_fol: f.clone(),
                    a_var: v.clone(),
                })
            })
            .collect();
        let verdict = adjoint_lc_check_with(&p.germ, &model.boundary_branches_at(i), &exceptional, params)?;
        out.push(AnnotationCheck {
            site: format!("point {}", p.name),
            verdict,
        });
    }
    for (c, w) in weights.iter().enumerate() {
        let Some((f, v)) = w else { continue };
        let curve = &model.curves[c];
        let equation = if curve.invariant {
            BivariatePolynomial::y()
        } else {
            BivariatePolynomial::x()
        };
        let branch = WeightedBranch {
            equation,
            invariant: curve.invariant,
            a_fol: f.clone(),
            a_var: v.clone(),
        };
        let verdict = adjoint_lc_check_with(&VectorFieldGerm::regular(), &[], &[branch], params)?;
        out.push(AnnotationCheck {
            site: format!("general point of {}", curve.name),
            verdict,
        });
    }
    Ok(out)
}

/// `1 - (1 + ε(1 - δ))/(1 + ε)`
pub fn eta_bound(epsilon: &Rational, delta: &Rational) -> Rational {
    let one = Rational::one();
    &one - (&one + epsilon * (&one - delta)) / (&one + epsilon)
}
