//! Resolution trees over a germ: the discrepancy ledger, Seidenberg
//! reduction, classification and (ε,δ)-adjoint log canonicity.

mod adjoint;
mod dot;
pub(crate) mod site;

pub use site::WeightedBranch;

pub use adjoint::{
    adjoint_lc_check, adjoint_lc_check_with, adjoint_threshold, search, AdjointParams, AdjointThreshold,
    AdjointVerdict, Affine, EpsilonMode, Witness, DEFAULT_NODE_LIMIT, DEFAULT_SEARCH_DEPTH,
};

use std::collections::VecDeque;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::germ::{EigenKind, ExceptionalPoint, VectorFieldGerm};
use site::{CurveSource, Site};

/// An exceptional divisor of the tree, with its ledger entries relative to
/// the root germ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorRecord {
    /// 1-based creation index.
    pub index: usize,
    /// Node blown up to create the divisor.
    pub center: usize,
    pub iota: u8,
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub a_fol: Rational,
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub a_var: Rational,
    pub self_intersection: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum NodeKind {
    Regular,
    Reduced,
    /// Blown up, creating the divisor with this index.
    BlownUp(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeNode {
    pub id: usize,
    pub parent: Option<usize>,
    /// Position on the parent's exceptional divisor.
    pub point: Option<ExceptionalPoint>,
    pub depth: usize,
    #[serde(serialize_with = "display_germ")]
    pub germ: VectorFieldGerm,
    /// Indices of exceptional divisors through this point.
    pub divisors_through: Vec<usize>,
    pub kind: NodeKind,
    pub children: Vec<usize>,
}

fn display_germ<S: serde::Serializer>(g: &VectorFieldGerm, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&g.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionTree {
    pub nodes: Vec<TreeNode>,
    pub divisors: Vec<DivisorRecord>,
}

impl ResolutionTree {
    pub fn blow_up_count(&self) -> usize {
        self.divisors.len()
    }

    pub fn dicritical_count(&self) -> usize {
        self.divisors.iter().filter(|d| d.iota == 1).count()
    }

    pub fn divisor(&self, index: usize) -> &DivisorRecord {
        &self.divisors[index - 1]
    }

    pub fn leaves(&self) -> impl Iterator<Item = &TreeNode> {
        self.nodes
            .iter()
            .filter(|n| !matches!(n.kind, NodeKind::BlownUp(_)))
    }

    pub fn depth(&self) -> usize {
        self.divisors
            .iter()
            .map(|d| self.nodes[d.center].depth + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn to_dot(&self) -> String {
        dot::to_dot(self)
    }
}

/// Blows up non-reduced singular points until every leaf is reduced.
pub fn seidenberg_reduce(g: &VectorFieldGerm, max_depth: usize) -> Result<ResolutionTree> {
    let root = Site::root(g.clone(), &[]);
    if !root.germ.is_singular() {
        return Err(Error::Precondition("germ is regular at the origin".into()));
    }
    let mut tree = ResolutionTree {
        nodes: Vec::new(),
        divisors: Vec::new(),
    };
    let mut queue: VecDeque<(usize, Site)> = VecDeque::new();
    tree.nodes.push(node(0, None, None, &root));
    queue.push_back((0, root));

    while let Some((id, site)) = queue.pop_front() {
        if !site.germ.is_singular() {
            tree.nodes[id].kind = NodeKind::Regular;
            continue;
        }
        if site.germ.linear_part().is_reduced() {
            tree.nodes[id].kind = NodeKind::Reduced;
            continue;
        }
        if site.depth >= max_depth {
            return Err(Error::DepthExceeded(max_depth));
        }
        let bu = site.blow_up()?;
        if let Some((f, _)) = bu.result.irrational_singular_factors.first() {
            return Err(Error::NonRationalPoint(format!(
                "singular points on E at the roots of {f}"
            )));
        }
        let index = tree.divisors.len() + 1;
        for &i in &bu.exceptionals_through {
            tree.divisors[i - 1].self_intersection -= 1;
        }
        tree.divisors.push(DivisorRecord {
            index,
            center: id,
            iota: bu.iota,
            a_fol: bu.a_fol.clone(),
            a_var: bu.a_var.clone(),
            self_intersection: -1,
        });
        tree.nodes[id].kind = NodeKind::BlownUp(index);
        let mut points = bu.result.singular_points.clone();
        points.sort();
        for p in points {
            let child = site.child(&bu, index, &p);
            let cid = tree.nodes.len();
            tree.nodes.push(node(cid, Some(id), Some(p), &child));
            tree.nodes[id].children.push(cid);
            queue.push_back((cid, child));
        }
    }
    Ok(tree)
}

fn node(id: usize, parent: Option<usize>, point: Option<ExceptionalPoint>, site: &Site) -> TreeNode {
    TreeNode {
        id,
        parent,
        point,
        depth: site.depth,
        germ: site.germ.clone(),
        divisors_through: site
            .curves
            .iter()
            .filter_map(|c| match c.source {
                CurveSource::Exceptional(i) => Some(i),
                CurveSource::Boundary(_) | CurveSource::External(_) => None,
            })
            .collect(),
        kind: NodeKind::Reduced,
        children: Vec::new(),
    }
}

/// Normal-form data of a reduced singularity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ReducedForm {
    SaddleNode,
    /// Non-degenerate, with the trace and determinant of the linear part.
    NonDegenerate {
        #[serde(with = "crate::exact::rational::serde_rational")]
        trace: Rational,
        #[serde(with = "crate::exact::rational::serde_rational")]
        det: Rational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SingularityClass {
    Terminal,
    /// `reduced` is set when the point itself is reduced.
    Canonical {
        reduced: Option<ReducedForm>,
    },
    StrictlyLogCanonical {
        p: u64,
        q: u64,
    },
    NotLogCanonical {
        reason: String,
    },
    Unknown {
        reason: String,
    },
}

impl SingularityClass {
    pub fn name(&self) -> &'static str {
        match self {
            SingularityClass::Terminal => "Terminal",
            SingularityClass::Canonical { .. } => "Canonical",
            SingularityClass::StrictlyLogCanonical { .. } => "StrictlyLogCanonical",
            SingularityClass::NotLogCanonical { .. } => "NotLogCanonical",
            SingularityClass::Unknown { .. } => "Unknown",
        }
    }

    pub fn is_log_canonical(&self) -> bool {
        matches!(
            self,
            SingularityClass::Terminal
                | SingularityClass::Canonical { .. }
                | SingularityClass::StrictlyLogCanonical { .. }
        )
    }
}

impl std::fmt::Display for SingularityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SingularityClass::Terminal => write!(f, "Terminal (regular point)"),
            SingularityClass::Canonical {
                reduced: Some(ReducedForm::SaddleNode),
            } => {
                write!(f, "Canonical (reduced saddle-node)")
            }
            SingularityClass::Canonical { reduced: Some(_) } => write!(f, "Canonical (reduced)"),
            SingularityClass::Canonical { reduced: None } => {
                write!(f, "Canonical (non-reduced, canonical after reduction)")
            }
            SingularityClass::StrictlyLogCanonical { p, q } => {
                write!(f, "StrictlyLogCanonical (eigenvalues {p}:{q})")
            }
            SingularityClass::NotLogCanonical { reason } => write!(f, "NotLogCanonical ({reason})"),
            SingularityClass::Unknown { reason } => write!(f, "Unknown ({reason})"),
        }
    }
}

/// Classifies the singularity at the origin of `g`.
pub fn classify(g: &VectorFieldGerm) -> SingularityClass {
    let g = g.saturate();
    if !g.is_singular() {
        return SingularityClass::Terminal;
    }
    let lp = g.linear_part();
    match lp.eigen_kind() {
        EigenKind::Zero => SingularityClass::NotLogCanonical {
            reason: "zero linear part".into(),
        },
        EigenKind::Nilpotent => SingularityClass::NotLogCanonical {
            reason: "nilpotent linear part".into(),
        },
        EigenKind::SaddleNode => SingularityClass::Canonical {
            reduced: Some(ReducedForm::SaddleNode),
        },
        EigenKind::NonResonant => SingularityClass::Canonical {
            reduced: Some(ReducedForm::NonDegenerate {
                trace: lp.matrix.trace(),
                det: lp.matrix.det(),
            }),
        },
        EigenKind::PositiveRational { p, q } => {
            // the Euclidean tree of a linearizable point needs at most p blow-ups
            let depth = DEFAULT_SEARCH_DEPTH.max(p as usize + 2);
            match seidenberg_reduce(&g, depth) {
                Ok(tree) => {
                    if tree.divisors.iter().any(|d| d.a_fol.is_negative()) {
                        SingularityClass::StrictlyLogCanonical { p, q }
                    } else {
                        SingularityClass::Canonical { reduced: None }
                    }
                }
                Err(e) => SingularityClass::Unknown {
                    reason: e.to_string(),
                },
            }
        }
    }
}

/// Reduction tree of `p x∂x + q y∂y` for coprime positive `p`, `q`.
pub fn strict_lc_resolution(p: u64, q: u64) -> Result<ResolutionTree> {
    if p == 0 || q == 0 || num_integer::Integer::gcd(&p, &q) != 1 {
        return Err(Error::InvalidInput(format!(
            "({p}, {q}) is not a coprime positive pair"
        )));
    }
    let g = VectorFieldGerm::linear_diagonal(p as i64, q as i64);
    seidenberg_reduce(&g, (p + q) as usize + 1)
}

/// Smallest foliation discrepancy in a tree (zero for an empty tree).
pub fn min_foliation_discrepancy(tree: &ResolutionTree) -> Rational {
    tree.divisors
        .iter()
        .map(|d| d.a_fol.clone())
        .min()
        .unwrap_or_else(Rational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;

    fn germ(s: &str) -> VectorFieldGerm {
        VectorFieldGerm::parse(s).unwrap()
    }

    #[test]
    fn reduced_root_is_single_node() {
        let t = seidenberg_reduce(&germ("dx: x, dy: -y"), 8).unwrap();
        assert_eq!(t.nodes.len(), 1);
        assert!(t.divisors.is_empty());
    }

    #[test]
    fn two_three_follows_euclid() {
        let t = seidenberg_reduce(&germ("dx: 2*x, dy: 3*y"), 8).unwrap();
        // (2,3) -> (2,1) -> (1,1) -> dicritical
        assert_eq!(t.blow_up_count(), 3);
        assert_eq!(t.dicritical_count(), 1);
        assert!(t
            .leaves()
            .all(|n| n.germ.linear_part().is_reduced() || !n.germ.is_singular()));
    }

    #[test]
    fn cusp_reduces_quickly() {
        let t = seidenberg_reduce(&germ("dx: y, dy: x^2"), 8).unwrap();
        assert!(t.depth() <= 4, "depth {}", t.depth());
    }

    #[test]
    fn classification_examples() {
        assert_eq!(
            classify(&germ("dx: 3*x, dy: 5*y")),
            SingularityClass::StrictlyLogCanonical { p: 5, q: 3 }
        );
        assert_eq!(classify(&germ("dx: x, dy: -y")).name(), "Canonical");
        assert_eq!(classify(&germ("dx: y, dy: x^2")).name(), "NotLogCanonical");
        // y∂x saturates to ∂x
        assert_eq!(classify(&germ("dx: y, dy: 0")), SingularityClass::Terminal);
        assert_eq!(classify(&germ("dx: 1, dy: x")), SingularityClass::Terminal);
        assert_eq!(
            classify(&germ("dx: x, dy: x + y")),
            SingularityClass::Canonical { reduced: None }
        );
    }

    #[test]
    fn strict_lc_small_cases() {
        let t = strict_lc_resolution(1, 1).unwrap();
        assert_eq!((t.blow_up_count(), t.dicritical_count()), (1, 1));
        let t = strict_lc_resolution(2, 1).unwrap();
        assert_eq!((t.blow_up_count(), t.dicritical_count()), (2, 1));
        let t = strict_lc_resolution(3, 5).unwrap();
        assert_eq!((t.blow_up_count(), t.dicritical_count()), (4, 1));
        let last = t.divisors.iter().find(|d| d.iota == 1).unwrap();
        assert_eq!(last.a_fol, int(-1));
        assert_eq!(last.a_var, int(7));
    }

    #[test]
    fn self_intersections_drop_for_centers_on_divisors() {
        let t = strict_lc_resolution(2, 1).unwrap();
        // E1 has the second center on it
        assert_eq!(t.divisor(1).self_intersection, -2);
        assert_eq!(t.divisor(2).self_intersection, -1);
    }
}
