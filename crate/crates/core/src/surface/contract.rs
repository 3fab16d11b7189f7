//! Contractions of negative curve configurations: the pushforward as an
//! orthogonal projection, and the singular points they produce.

use std::collections::BTreeSet;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::lattice::{DivisorClass, PicardLattice};
use super::model::FoliatedSurfaceModel;
use crate::error::{Error, Result};
use crate::exact::{hirzebruch_jung_value, DenseMatrix, Rational};

/// Contraction of a set of curves with negative definite intersection
/// matrix. `push` maps a class to the pullback of its image, so that
/// `push(A)·B = A·push(B) = push(A)·push(B)`.
#[derive(Clone, Debug)]
pub struct Contraction {
    curves: Vec<usize>,
    classes: Vec<DivisorClass>,
    gram: DenseMatrix,
}

impl Contraction {
    pub(crate) fn of(model: &FoliatedSurfaceModel, curves: &[usize]) -> Result<Self> {
        let classes: Vec<DivisorClass> = curves.iter().map(|&i| model.curves[i].class.clone()).collect();
        let n = classes.len();
        let mut gram = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                gram.set(i, j, model.lattice.intersect(&classes[i], &classes[j])?);
            }
        }
        if n > 0 && gram.inertia() != (0, n, 0) {
            return Err(Error::NotContractible(
                "intersection matrix of the contracted curves is not negative definite".into(),
            ));
        }
        Ok(Self {
            curves: curves.to_vec(),
            classes,
            gram,
        })
    }

    pub fn curves(&self) -> &[usize] {
        &self.curves
    }

    pub fn push(&self, lattice: &PicardLattice, d: &DivisorClass) -> Result<DivisorClass> {
        if self.curves.is_empty() {
            return Ok(d.clone());
        }
        let rhs = self
            .classes
            .iter()
            .map(|c| lattice.intersect(d, c))
            .collect::<Result<Vec<_>>>()?;
        let coeffs = self.gram.solve(&rhs)?;
        let mut out = d.clone();
        for (c, a) in self.classes.iter().zip(&coeffs) {
            out = &out - &c.scale(a);
        }
        Ok(out)
    }
}

/// The contraction of `curve` on top of those already performed.
pub fn pushforward_class(model: &FoliatedSurfaceModel, curve: usize) -> Result<Contraction> {
    if curve >= model.curves.len() {
        return Err(Error::InvalidInput("unknown curve".into()));
    }
    let name = &model.curves[curve].name;
    if model.is_contracted(curve) {
        return Err(Error::NotContractible(format!("{name} is already contracted")));
    }
    let c = model.current_class(curve)?;
    if !model.intersect(&c, &c)?.is_negative() {
        return Err(Error::NotContractible(format!(
            "{name} has nonnegative self-intersection"
        )));
    }
    let mut all = model.contracted.clone();
    all.push(curve);
    Contraction::of(model, &all)
}

impl FoliatedSurfaceModel {
    /// Contracts a curve of negative self-intersection on the current surface.
    pub fn contract(&mut self, curve: usize) -> Result<()> {
        pushforward_class(self, curve)?;
        self.contracted.push(curve);
        Ok(())
    }

    /// The singular points of the current surface, one per connected
    /// configuration of contracted curves.
    pub fn singular_points(&self) -> Result<Vec<SingularPoint>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in &self.contracted {
            if !seen.insert(start) {
                continue;
            }
            let mut cluster = vec![start];
            let mut k = 0;
            while k < cluster.len() {
                let i = cluster[k];
                for &j in &self.contracted {
                    if !seen.contains(&j)
                        && !self
                            .intersect(&self.curves[i].class, &self.curves[j].class)?
                            .is_zero()
                    {
                        seen.insert(j);
                        cluster.push(j);
                    }
                }
                k += 1;
            }
            cluster.sort_unstable();
            out.push(self.describe_cluster(cluster)?);
        }
        Ok(out)
    }

    fn describe_cluster(&self, curves: Vec<usize>) -> Result<SingularPoint> {
        let contraction = Contraction::of(self, &curves)?;
        let (fol, var) = self.log_canonical_parts();
        let disc = |k: &DivisorClass| -> Result<Vec<Rational>> {
            let rhs = curves
                .iter()
                .map(|&i| self.intersect(k, &self.curves[i].class))
                .collect::<Result<Vec<_>>>()?;
            contraction.gram.solve(&rhs)
        };
        let a_fol = disc(&fol)?;
        let a_var = disc(&var)?;
        let kind = self.cluster_kind(&curves, &contraction.gram);
        Ok(SingularPoint {
            iota: curves
                .iter()
                .map(|&i| u8::from(!self.curves[i].invariant))
                .collect(),
            curves,
            kind,
            a_fol,
            a_var,
        })
    }

    fn cluster_kind(&self, curves: &[usize], gram: &DenseMatrix) -> SurfacePointKind {
        let n = curves.len();
        if curves.iter().any(|&i| self.curves[i].genus != 0) {
            return SurfacePointKind::Other;
        }
        let mut degree = vec![0usize; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let v = gram.get(i, j);
                if v > &Rational::from_integer(1.into()) || v.is_negative() {
                    return SurfacePointKind::Other;
                }
                if !v.is_zero() {
                    degree[i] += 1;
                }
            }
        }
        let edges: usize = degree.iter().sum::<usize>() / 2;
        if degree.iter().any(|&d| d > 2) || edges + 1 != n {
            return SurfacePointKind::Other;
        }
        // walk the chain from an end
        let mut order = vec![degree.iter().position(|&d| d <= 1).unwrap_or(0)];
        while order.len() < n {
            let last = *order.last().unwrap();
            let next = (0..n)
                .find(|&j| !order.contains(&j) && !gram.get(last, j).is_zero())
                .expect("connected chain");
            order.push(next);
        }
        let mut squares: Vec<i64> = order
            .iter()
            .map(|&i| gram.get(i, i).to_integer().to_i64().unwrap_or(i64::MIN))
            .collect();
        while let Some(k) = squares.iter().position(|&s| s == -1) {
            squares.remove(k);
            if k > 0 {
                squares[k - 1] += 1;
            }
            if k < squares.len() {
                squares[k] += 1;
            }
        }
        if squares.is_empty() {
            return SurfacePointKind::Smooth;
        }
        if squares.iter().any(|&s| s >= 0) {
            return SurfacePointKind::Other;
        }
        let digits: Vec<u64> = squares.iter().map(|&s| (-s) as u64).collect();
        let v = hirzebruch_jung_value(&digits);
        match (v.numer().to_u64(), v.denom().to_u64()) {
            (Some(m), Some(b)) => SurfacePointKind::CyclicQuotient { m, b },
            _ => SurfacePointKind::Other,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SurfacePointKind {
    /// The configuration blows down to a smooth point.
    Smooth,
    /// `1/m(1, b)`
    CyclicQuotient { m: u64, b: u64 },
    /// Not a chain of rational curves; only the discrepancies are recorded.
    Other,
}

impl std::fmt::Display for SurfacePointKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SurfacePointKind::Smooth => write!(f, "smooth"),
            SurfacePointKind::CyclicQuotient { m, b } => write!(f, "1/{m}(1,{b})"),
            SurfacePointKind::Other => write!(f, "other"),
        }
    }
}

/// A point of the current surface under a connected contracted
/// configuration, with the discrepancies of its curves with respect to
/// `K_F + Δ_n-inv` and `K_X + Δ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularPoint {
    pub curves: Vec<usize>,
    pub kind: SurfacePointKind,
    pub iota: Vec<u8>,
    #[serde(with = "crate::exact::rational::serde_rational::vec")]
    pub a_fol: Vec<Rational>,
    #[serde(with = "crate::exact::rational::serde_rational::vec")]
    pub a_var: Vec<Rational>,
}

impl SingularPoint {
    /// `min(1 + a_var)`, the variety log discrepancy margin.
    pub fn log_discrepancy_margin(&self) -> Rational {
        self.a_var
            .iter()
            .map(|a| a + Rational::from_integer(1.into()))
            .min()
            .unwrap_or_else(|| Rational::from_integer(1.into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::germ::VectorFieldGerm;
    use crate::surface::model::{blow_up_model, BaseSurface, BlowUpCenter};

    fn plane(kf: i64) -> FoliatedSurfaceModel {
        FoliatedSurfaceModel::new(BaseSurface::ProjectivePlane, DivisorClass::from_integers(&[kf])).unwrap()
    }

    #[test]
    fn contracting_e1_projects_away() {
        let mut m = plane(1);
        m.add_point("p", VectorFieldGerm::regular(), vec![]).unwrap();
        let mut m = blow_up_model(&m, &BlowUpCenter::Point(0)).unwrap();
        let e = m.curve_index("E1").unwrap();
        let line = m.lattice.parse_class("H - E1").unwrap();
        let c = pushforward_class(&m, e).unwrap();
        let h = m.lattice.parse_class("H").unwrap();
        assert_eq!(c.push(&m.lattice, &line).unwrap(), h);
        let d = m.lattice.parse_class("3H + 5E1").unwrap();
        assert_eq!(m.intersect(&c.push(&m.lattice, &d).unwrap(), &h).unwrap(), int(3));
        m.contract(e).unwrap();
        assert_eq!(m.rank(), 1);
        let sp = m.singular_points().unwrap();
        assert_eq!(sp[0].kind, SurfacePointKind::Smooth);
        // K_F = π*K_F + E, K_X = π*K_X + E
        assert_eq!(sp[0].a_fol, vec![int(1)]);
        assert_eq!(sp[0].a_var, vec![int(1)]);
        assert!(m.contract(e).is_err());
    }

    #[test]
    fn minus_three_curve_gives_one_third() {
        // F_3 with the negative section contracted
        let mut m =
            FoliatedSurfaceModel::new(BaseSurface::Hirzebruch(3), DivisorClass::from_integers(&[-3, -2]))
                .unwrap();
        let c0 = m.lattice.basis(1);
        let c = m.add_curve("C0", c0, false, 0).unwrap();
        m.contract(c).unwrap();
        let sp = m.singular_points().unwrap();
        assert_eq!(sp[0].kind, SurfacePointKind::CyclicQuotient { m: 3, b: 1 });
        assert_eq!(sp[0].a_var, vec![rat(-1, 3)]);
        assert_eq!(sp[0].log_discrepancy_margin(), rat(2, 3));
    }

    #[test]
    fn chain_with_minus_one_reduces() {
        let mut m = plane(1);
        m.add_point("p", VectorFieldGerm::regular(), vec![]).unwrap();
        let m = blow_up_model(&m, &BlowUpCenter::Point(0)).unwrap();
        let q = m.point_index("E1[t=0]").unwrap();
        let mut m = blow_up_model(&m, &BlowUpCenter::Point(q)).unwrap();
        let e1 = m.curve_index("E1").unwrap();
        let e2 = m.curve_index("E2").unwrap();
        assert_eq!(
            m.intersect(&m.curves[e1].class, &m.curves[e1].class).unwrap(),
            int(-2)
        );
        m.contract(e2).unwrap();
        m.contract(e1).unwrap();
        let sp = m.singular_points().unwrap();
        assert_eq!(sp.len(), 1);
        assert_eq!(sp[0].kind, SurfacePointKind::Smooth);
        let mut m2 = blow_up_model(
            &{
                let mut m = plane(1);
                m.add_point("p", VectorFieldGerm::regular(), vec![]).unwrap();
                m
            },
            &BlowUpCenter::Point(0),
        )
        .unwrap();
        let q = m2.point_index("E1[t=0]").unwrap();
        m2 = blow_up_model(&m2, &BlowUpCenter::Point(q)).unwrap();
        let e1 = m2.curve_index("E1").unwrap();
        m2.contract(e1).unwrap();
        assert_eq!(
            m2.singular_points().unwrap()[0].kind,
            SurfacePointKind::CyclicQuotient { m: 2, b: 1 }
        );
    }

    #[test]
    fn push_pull_identity() {
        let mut m = plane(2);
        m.add_point("p", VectorFieldGerm::regular(), vec![]).unwrap();
        let m = blow_up_model(&m, &BlowUpCenter::Point(0)).unwrap();
        let q = m.point_index("E1[t=0]").unwrap();
        let m = blow_up_model(&m, &BlowUpCenter::Point(q)).unwrap();
        let e1 = m.curve_index("E1").unwrap();
        let c = pushforward_class(&m, e1).unwrap();
        let a = m.lattice.parse_class("2H - 3E1 + E2").unwrap();
        let b = m.lattice.parse_class("-H + 5/2E1 - 7E2").unwrap();
        let pa = c.push(&m.lattice, &a).unwrap();
        let pb = c.push(&m.lattice, &b).unwrap();
        let lhs = m.intersect(&pa, &b).unwrap();
        assert_eq!(lhs, m.intersect(&a, &pb).unwrap());
        assert_eq!(lhs, m.intersect(&pa, &pb).unwrap());
    }
}
