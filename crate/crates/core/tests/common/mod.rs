//! Shared fixtures and oracles for the integration tests.
#![allow(dead_code)]

use folmmp::exact::BivariatePolynomial;
use folmmp::germ::{Chart, ExceptionalPoint, VectorFieldGerm};
use folmmp::surface::{DivisorClass, FoliatedSurfaceModel};
use folmmp::Rational;
use num_traits::{One, Zero};

const LINEAR: &str = "folmmp-surface v1
base P2
kf 0
curve X H invariant
curve Y H invariant
curve Z H invariant
point P0 germ dx: x, dy: 3*y ; on Y x ; on Z y
point P1 germ dx: -x, dy: 2*y ; on X x ; on Z y
point P2 germ dx: -3*x, dy: -2*y ; on X x ; on Y y
";

const F1_FIBRATION: &str = "folmmp-surface v1
base F1
kf -2C0 - F
curve C0 C0 non-invariant
curve L F invariant
point p germ dx: 1, dy: 0 ; on L y ; on C0 x
fibration F
";

fn with(base: &str, tail: &str) -> String {
    format!("{base}{tail}")
}

/// Blow-ups of `P²` and `F_n` of depth at most five with germ annotations.
pub fn mmp_corpus() -> Vec<(&'static str, String)> {
    let plane = "folmmp-surface v1\nbase P2\n";
    vec![
        ("plane-regular-depth2", format!("{plane}kf H\npoint p germ dx: 1, dy: 0\nblowup p\nblowup E1[t=0]\n")),
        ("plane-regular-depth5", format!(
            "{plane}kf H\npoint p germ dx: 1, dy: 0\nblowup p\nblowup E1[t=0]\nblowup E2[t=0]\nblowup E3[t=0]\nblowup E4[t=0]\n"
        )),
        ("linear-plane", LINEAR.to_string()),
        ("linear-plane-saddle-blown-up", with(LINEAR, "blowup P1\n")),
        ("linear-plane-depth2", with(LINEAR, "blowup P1\nblowup E1[t=0]\nfibration H - E1\n")),
        ("linear-plane-depth3", with(LINEAR, "blowup P1\nblowup E1[t=0]\nblowup E2[t=0]\nfibration H - E1\n")),
        ("plane-radial", format!("{plane}kf H\npoint r germ dx: x, dy: y\nblowup r\n")),
        ("F1-fibration", F1_FIBRATION.to_string()),
        ("F1-fibration-depth1", with(F1_FIBRATION, "blowup p\n")),
        ("F1-fibration-depth2", with(F1_FIBRATION, "blowup p\nblowup E1[t=0]\n")),
        ("F1-fibration-boundary", with(F1_FIBRATION, "boundary C0 1/2\nblowup p\n")),
        ("F2-fibration", "folmmp-surface v1\nbase F2\nkf -2C0 - 2F\ncurve C0 C0 non-invariant\ncurve L F invariant\npoint p germ dx: 1, dy: 0 ; on L y ; on C0 x\nfibration F\n".into()),
        ("F1-invariant-section", riccati(1)),
        ("F2-invariant-section", riccati(2)),
        ("F3-invariant-section", riccati(3)),
        ("F4-invariant-section", riccati(4)),
        ("plane-cubic-saddle-depth3", format!(
            "{plane}kf 2H\npoint p germ dx: x, dy: -y\nblowup p\nblowup E1[t=0]\nblowup E2[t=0]\n"
        )),
        ("plane-saddle-node", format!("{plane}kf H\npoint p germ dx: x^2, dy: y\nblowup p\n")),
        ("plane-saddle-both-separatrices", format!(
            "{plane}kf H\npoint p germ dx: x, dy: -y\nblowup p\nblowup E1[t=0]\nblowup E1[s=0]\n"
        )),
        ("plane-line-boundary", format!(
            "{plane}kf H\ncurve M H non-invariant\npoint p germ dx: 1, dy: 0 ; on M x\nboundary M 1/2\nblowup p\n"
        )),
    ]
}

/// `F_n` with a foliation leaving the negative section invariant and
/// transverse to the fibers.
fn riccati(n: u32) -> String {
    format!(
        "folmmp-surface v1\nbase F{n}\nkf -2F\ncurve C0 C0 invariant\ncurve L F non-invariant\npoint q germ dx: 1, dy: 0 ; on C0 y ; on L x\nfibration F\n"
    )
}

/// Nef models whose ε-canonical model contracts something at `ε = 1/10`.
pub fn canonical_fixtures() -> Vec<(&'static str, String)> {
    vec![
        // invariant (-2)-curve with K_F·C = K_X·C = 0
        (
            "F2-invariant-minus-two",
            "folmmp-surface v1\nbase F2\nkf C0 + 2F\ncurve C0 C0 invariant\ncurve L F non-invariant\npoint q germ dx: 1, dy: 0 ; on C0 y ; on L x\n".into(),
        ),
        // non-invariant (-1)-curve with (K_F + cE)·E = -ε(K_X + cE)·E
        (
            "plane-dicritical-weighted",
            "folmmp-surface v1\nbase P2\nkf H\ncurve M H non-invariant\npoint r germ dx: x, dy: y\nblowup r\nboundary E1 9/11\n".into(),
        ),
    ]
}

/// Solves `A x = b` over the rationals; `None` when `A` is singular.
pub fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                for c in col..n {
                    let v = &f * &a[col][c];
                    a[r][c] -= v;
                }
                let v = &f * &b[col];
                b[r] -= v;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

pub fn dot(m: &FoliatedSurfaceModel, a: &DivisorClass, b: &DivisorClass) -> Rational {
    m.lattice.intersect(a, b).unwrap()
}

fn combine(a: &DivisorClass, b: &DivisorClass, t: &Rational) -> DivisorClass {
    DivisorClass {
        coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + t * y).collect(),
    }
}

/// Coefficients `c` with `(D - Σ c_j C_j)·C_i = 0` for the given curves.
pub fn projection_coefficients(
    m: &FoliatedSurfaceModel,
    d: &DivisorClass,
    curves: &[usize],
) -> Vec<Rational> {
    let classes: Vec<&DivisorClass> = curves.iter().map(|&i| &m.curves[i].class).collect();
    let gram = classes
        .iter()
        .map(|a| classes.iter().map(|b| dot(m, a, b)).collect())
        .collect();
    let rhs = classes.iter().map(|c| dot(m, d, c)).collect();
    solve(gram, rhs).expect("contracted curves have a nondegenerate Gram matrix")
}

/// `D` pushed to the surface with `curves` contracted and pulled back.
pub fn project(m: &FoliatedSurfaceModel, d: &DivisorClass, curves: &[usize]) -> DivisorClass {
    let c = projection_coefficients(m, d, curves);
    let mut out = d.clone();
    for (&i, a) in curves.iter().zip(&c) {
        out = combine(&out, &m.curves[i].class, &-a);
    }
    out
}

/// `(K_F + Δ_n-inv, K_X + Δ)` on the top surface, built from the model's fields.
pub fn log_canonical(m: &FoliatedSurfaceModel) -> (DivisorClass, DivisorClass) {
    let mut fol = m.k_f.clone();
    let mut var = m.k_x.clone();
    for b in &m.boundary {
        let c = &m.curves[b.curve];
        var = combine(&var, &c.class, &b.coefficient);
        if !c.invariant {
            fol = combine(&fol, &c.class, &b.coefficient);
        }
    }
    (fol, var)
}

pub fn adjoint(m: &FoliatedSurfaceModel, eps: &Rational) -> DivisorClass {
    let (fol, var) = log_canonical(m);
    combine(&fol, &var, eps)
}

/// Degrees `(fol, var, adj, C²)` of curve `i` on the surface with `curves` contracted.
pub fn degrees(m: &FoliatedSurfaceModel, i: usize, curves: &[usize], eps: &Rational) -> [Rational; 4] {
    let c = project(m, &m.curves[i].class, curves);
    let (fol, var) = log_canonical(m);
    let f = dot(m, &fol, &c);
    let v = dot(m, &var, &c);
    [f.clone(), v.clone(), &f + eps * &v, dot(m, &c, &c)]
}

fn x_val(p: &BivariatePolynomial) -> Option<u32> {
    (!p.is_zero()).then(|| p.x_valuation())
}

/// Replays the blow-ups at the origin and then at the points of `path`
/// as one composite polynomial map, and reads `(ι, a_fol, a_var)` of the
/// last exceptional divisor off the pulled-back 1-form `b dx - a dy` and
/// the Jacobian.
pub fn replay_discrepancy(g: &VectorFieldGerm, path: &[ExceptionalPoint]) -> (u8, Rational, Rational) {
    let x = BivariatePolynomial::x();
    let y = BivariatePolynomial::y();
    let mut p = x.clone();
    let mut q = y.clone();
    let chart_maps = path
        .iter()
        .map(|pt| match pt.chart {
            Chart::First => {
                let shifted = &y + &BivariatePolynomial::constant(pt.t.clone());
                (x.clone(), &x * &shifted)
            }
            Chart::Second => {
                assert!(pt.t.is_zero(), "second chart points are at s = 0");
                (&x * &y, x.clone())
            }
        })
        .chain(std::iter::once((x.clone(), &x * &y)));
    for (u, v) in chart_maps {
        p = p.compose(&u, &v);
        q = q.compose(&u, &v);
    }
    let g = g.saturate();
    let a = g.a().compose(&p, &q);
    let b = g.b().compose(&p, &q);
    let form_x = &(&b * &p.d_dx()) - &(&a * &q.d_dx());
    let form_y = &(&b * &p.d_dy()) - &(&a * &q.d_dy());
    let jac = &(&p.d_dx() * &q.d_dy()) - &(&p.d_dy() * &q.d_dx());
    let k = [x_val(&form_x), x_val(&form_y)]
        .into_iter()
        .flatten()
        .min()
        .unwrap();
    let a_var = jac.x_valuation();
    let iota = u8::from(x_val(&form_y) == Some(k));
    let r = |n: u32| Rational::from_integer(n.into());
    (iota, r(a_var) - r(k), r(a_var))
}

pub fn one() -> Rational {
    Rational::one()
}
