//! Cyclic quotient singularities `1/m(1,b)` carrying the image of a
//! foliation from `C²`, their Hirzebruch–Jung resolutions, the adjoint
//! threshold, the eigenvalue sets Λ(ε′) and the adjoint Riemann–Hurwitz
//! pullback.

mod eigen;
mod rh;

pub use eigen::{eigenvalue_set, EigenvaluePair};
pub use rh::{rh_pullback, CoverDivisor, Ramification, UpstairsCoefficient};

use std::fmt::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{hirzebruch_jung, DenseMatrix, Rational};
use crate::germ::{Chart, ExceptionalPoint, VectorFieldGerm};
use crate::restree::site::Site;

/// `C²` with a foliation, divided by `(x, y) -> (ξx, ξ^b y)`, ξ a primitive
/// `m`-th root of unity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicQuotientGerm {
    pub m: u64,
    pub b: u64,
    pub upstairs: VectorFieldGerm,
}

impl CyclicQuotientGerm {
    /// With the default upstairs foliation `⟨∂/∂x⟩`.
    pub fn new(m: u64, b: u64) -> Result<Self> {
        Self::with_germ(m, b, VectorFieldGerm::regular())
    }

    pub fn with_germ(m: u64, b: u64, upstairs: VectorFieldGerm) -> Result<Self> {
        if m < 2 || b == 0 || b >= m || m.gcd(&b) != 1 {
            return Err(Error::InvalidInput(format!(
                "1/{m}(1,{b}) needs m >= 2, 1 <= b < m and gcd(m, b) = 1"
            )));
        }
        let g = Self { m, b, upstairs };
        if !g.is_equivariant() {
            return Err(Error::InvalidInput(format!(
                "upstairs germ {} is not invariant under 1/{m}(1,{b})",
                g.upstairs
            )));
        }
        Ok(g)
    }

    /// The foliation is preserved iff there is a character `k` with every
    /// monomial `x^i y^j` of `a` of weight `1 + k` and of `b` of weight
    /// `b + k`, the weight of `x^i y^j` being `i + b j` mod `m`.
    pub fn is_equivariant(&self) -> bool {
        let m = self.m;
        let weight = |i: u32, j: u32| (i as u64 + self.b * j as u64) % m;
        let mut shift: Option<u64> = None;
        let mut agree = |w: u64, base: u64| {
            let k = (w + m - base % m) % m;
            match shift {
                None => {
                    shift = Some(k);
                    true
                }
                Some(s) => s == k,
            }
        };
        self.upstairs
            .a()
            .terms()
            .all(|((i, j), _)| agree(weight(*i, *j), 1))
            && self
                .upstairs
                .b()
                .terms()
                .all(|((i, j), _)| agree(weight(*i, *j), self.b))
    }
}

/// One curve of the Hirzebruch–Jung chain with its discrepancies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainDivisor {
    /// The `c_i` with `E_i² = -c_i`.
    pub self_intersection: i64,
    pub iota: u8,
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub a_fol: Rational,
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub a_var: Rational,
    /// Primitive vector of the ray in `Z²` and the ramification index of
    /// the cover over this divisor.
    pub upstairs_weights: (u64, u64),
    pub ramification: u64,
    /// Foliation discrepancy of the upstairs divisor over the origin of `C²`.
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub upstairs_a_fol: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientResolution {
    pub m: u64,
    pub b: u64,
    pub hj: Vec<u64>,
    pub chain: Vec<ChainDivisor>,
}

impl QuotientResolution {
    /// Chain intersection matrix: `-c_i` on the diagonal, 1 next to it.
    pub fn intersection_matrix(&self) -> DenseMatrix {
        let r = self.hj.len();
        DenseMatrix::from_fn(r, r, |i, j| {
            if i == j {
                -Rational::from_integer(BigInt::from(self.hj[i]))
            } else if i.abs_diff(j) == 1 {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }
}

/// Chain points `u_0 = (0,1)`, `u_1 = (1/m, b/m)`, `u_{i+1} = c_i u_i - u_{i-1}`
/// of the lattice `Z² + Z (1/m, b/m)`, as integer vectors scaled by `m`.
fn chain_points(m: u64, b: u64, hj: &[u64]) -> Vec<(i64, i64)> {
    let mut pts = vec![(0i64, m as i64), (1i64, b as i64)];
    for (i, c) in hj.iter().enumerate() {
        let (p, q) = (pts[i + 1], pts[i]);
        pts.push((*c as i64 * p.0 - q.0, *c as i64 * p.1 - q.1));
    }
    pts
}

/// Resolves `1/m(1,b)` and computes both discrepancy ledgers of the chain.
pub fn quotient_resolution(g: &CyclicQuotientGerm) -> Result<QuotientResolution> {
    let hj = hirzebruch_jung(g.m, g.b)?;
    let r = hj.len();
    let mut res = QuotientResolution {
        m: g.m,
        b: g.b,
        hj: hj.clone(),
        chain: Vec::with_capacity(r),
    };
    let rhs: Vec<Rational> = hj
        .iter()
        .map(|c| Rational::from_integer(BigInt::from(*c as i64 - 2)))
        .collect();
    let a_var = res.intersection_matrix().solve(&rhs)?;
    let pts = chain_points(g.m, g.b, &hj);
    debug_assert_eq!(pts[r + 1], (g.m as i64, 0));
    for i in 0..r {
        let (v1, v2) = pts[i + 1];
        let k = (v1.gcd(&v2)) as u64;
        let w = ((v1 as u64) / k, (v2 as u64) / k);
        let ramification = g.m / k;
        let (up_fol, up_iota) = toric_divisor_discrepancy(&g.upstairs, w)?;
        let rr = Rational::from_integer(BigInt::from(ramification));
        let a_fol = (up_fol.clone() - (&rr - Rational::one()) * Rational::from_integer(up_iota.into())) / &rr;
        res.chain.push(ChainDivisor {
            self_intersection: -(hj[i] as i64),
            iota: up_iota,
            a_fol,
            a_var: a_var[i].clone(),
            upstairs_weights: w,
            ramification,
            upstairs_a_fol: up_fol,
        });
    }
    Ok(res)
}

/// Foliation discrepancy and ι of the toric divisor with weights
/// `(α, β) = (v(x), v(y))` over the origin, reached by blowing up torus
/// fixed points along the subtractive Euclidean algorithm.
pub fn toric_divisor_discrepancy(g: &VectorFieldGerm, w: (u64, u64)) -> Result<(Rational, u8)> {
    let (mut alpha, mut beta) = w;
    if alpha == 0 || beta == 0 || alpha.gcd(&beta) != 1 {
        return Err(Error::InvalidInput(format!(
            "{w:?} is not a primitive positive weight"
        )));
    }
    let mut site = Site::root(g.clone(), &[]);
    let mut index = 0;
    loop {
        let bu = site.blow_up()?;
        index += 1;
        if alpha == beta {
            return Ok((bu.a_fol, bu.iota));
        }
        // chart First: v(t) = β - α; chart Second: v(s) = α - β
        let point = if beta > alpha {
            beta -= alpha;
            ExceptionalPoint::first(Rational::zero())
        } else {
            let (a, b) = (beta, alpha - beta);
            alpha = a;
            beta = b;
            ExceptionalPoint {
                chart: Chart::Second,
                t: Rational::zero(),
            }
        };
        site = site.child(&bu, index, &point);
    }
}

/// Sup of `ε` with `a_fol + ε a_var >= 0` along the whole chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum QuotientThreshold {
    Unbounded,
    Finite(#[serde(with = "crate::exact::rational::serde_rational")] Rational),
}

impl QuotientThreshold {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            QuotientThreshold::Finite(t) => Some(t),
            QuotientThreshold::Unbounded => None,
        }
    }
}

impl std::fmt::Display for QuotientThreshold {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QuotientThreshold::Unbounded => write!(f, "unbounded"),
            QuotientThreshold::Finite(t) => write!(f, "{t}"),
        }
    }
}

pub fn threshold_of(res: &QuotientResolution) -> QuotientThreshold {
    res.chain
        .iter()
        .filter(|d| d.a_var.is_negative())
        .map(|d| &d.a_fol / -&d.a_var)
        .min()
        .map_or(QuotientThreshold::Unbounded, QuotientThreshold::Finite)
}

pub fn quotient_adjoint_threshold(m: u64, b: u64) -> Result<QuotientThreshold> {
    if m <= 2 {
        return Err(Error::InvalidInput(format!(
            "m = {m}: the threshold needs m >= 3"
        )));
    }
    Ok(threshold_of(&quotient_resolution(&CyclicQuotientGerm::new(
        m, b,
    )?)?))
}

/// One row of an `(m, b)` sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub resolution: QuotientResolution,
    pub threshold: QuotientThreshold,
    /// Whether the threshold equals `1/(m-2)`.
    pub attains: bool,
}

/// All coprime `b` in `1..m`, or the given one.
pub fn quotient_sweep(m: u64, b: Option<u64>) -> Result<Vec<SweepRow>> {
    if m <= 2 {
        return Err(Error::InvalidInput(format!(
            "m = {m}: the threshold needs m >= 3"
        )));
    }
    let target = Rational::new(BigInt::one(), BigInt::from(m - 2));
    let bs: Vec<u64> = match b {
        Some(b) => vec![b],
        None => (1..m).filter(|b| m.gcd(b) == 1).collect(),
    };
    bs.into_iter()
        .map(|b| {
            let resolution = quotient_resolution(&CyclicQuotientGerm::new(m, b)?)?;
            let threshold = threshold_of(&resolution);
            let attains = threshold.finite() == Some(&target);
            Ok(SweepRow {
                resolution,
                threshold,
                attains,
            })
        })
        .collect()
}

pub const SWEEP_TSV_HEADER: &str = "m\tb\thj\ta_fol\ta_var\tthreshold\tattains_1/(m-2)";

pub fn sweep_tsv(rows: &[SweepRow]) -> String {
    let mut out = String::new();
    out.push_str(SWEEP_TSV_HEADER);
    out.push('\n');
    for row in rows {
        let r = &row.resolution;
        let join = |f: &dyn Fn(&ChainDivisor) -> String| r.chain.iter().map(f).collect::<Vec<_>>().join(",");
        let hj = r.hj.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        let _ = writeln!(
            out,
            "{}\t{}\t[{}]\t{}\t{}\t{}\t{}",
            r.m,
            r.b,
            hj,
            join(&|d| d.a_fol.to_string()),
            join(&|d| d.a_var.to_string()),
            row.threshold,
            if row.attains { "yes" } else { "no" }
        );
    }
    out
}

/// Smallest `b` realizing `1/(m-2)` in a sweep.
pub fn realizing_b(rows: &[SweepRow]) -> Option<u64> {
    rows.iter().find(|r| r.attains).map(|r| r.resolution.b)
}
