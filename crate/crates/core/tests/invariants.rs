mod common;

use common::{canonical_fixtures, dot, mmp_corpus, replay_discrepancy};
use folmmp::exact::{int, rat};
use folmmp::germ::{ExceptionalPoint, VectorFieldGerm};
use folmmp::mmp::{epsilon_canonical_model, run_adjoint_mmp, MMPOutcome};
use folmmp::restree::{seidenberg_reduce, strict_lc_resolution, AdjointParams, ResolutionTree};
use folmmp::surface::{blow_up_model, emit_surface, parse_surface, BlowUpCenter, FoliatedSurfaceModel};
use folmmp::Rational;
use num_traits::{One, Zero};

fn path_to(tree: &ResolutionTree, mut node: usize) -> Vec<ExceptionalPoint> {
    let mut path = Vec::new();
    while let Some(p) = &tree.nodes[node].point {
        path.push(p.clone());
        node = tree.nodes[node].parent.unwrap();
    }
    path.reverse();
    path
}

fn trees() -> Vec<(String, VectorFieldGerm, ResolutionTree)> {
    let mut out = Vec::new();
    for text in [
        "dx: y, dy: x^2",
        "dx: y^2, dy: x^3",
        "dx: x*y, dy: x^3 + y^2",
        "dx: x^2, dy: y^2",
        "dx: y^2, dy: x^3 + x*y",
    ] {
        let g = VectorFieldGerm::parse(text).unwrap();
        out.push((text.to_string(), g.clone(), seidenberg_reduce(&g, 32).unwrap()));
    }
    for (p, q) in [(3, 2), (5, 3), (7, 4), (13, 8)] {
        let g = VectorFieldGerm::linear_diagonal(p as i64, q as i64);
        out.push((format!("node {p}:{q}"), g, strict_lc_resolution(p, q).unwrap()));
    }
    out
}

#[test]
fn ledger_matches_composite_pullback() {
    for (name, g, tree) in trees() {
        assert!(!tree.divisors.is_empty(), "{name}");
        for d in &tree.divisors {
            let path = path_to(&tree, d.center);
            let (iota, a_fol, a_var) = replay_discrepancy(&g, &path);
            assert_eq!(
                (d.iota, &d.a_fol, &d.a_var),
                (iota, &a_fol, &a_var),
                "{name} E{}",
                d.index
            );
        }
    }
}

#[test]
fn variety_discrepancy_is_small_at_depth_three() {
    let ys = [
        ExceptionalPoint::first(Rational::zero()),
        ExceptionalPoint::first(Rational::one()),
        ExceptionalPoint::at_infinity(),
    ];
    let g = VectorFieldGerm::regular();
    let mut worst = Rational::zero();
    for a in &ys {
        for b in &ys {
            let (_, _, a_var) = replay_discrepancy(&g, &[a.clone(), b.clone()]);
            assert!(a_var <= int(4));
            worst = worst.max(a_var);
        }
    }
    assert_eq!(worst, int(4));
    for (name, _, tree) in trees() {
        for d in &tree.divisors {
            if tree.nodes[d.center].depth < 3 {
                assert!(d.a_var <= int(4), "{name} E{}", d.index);
            }
        }
    }
}

fn round_trip(name: &str, m: &FoliatedSurfaceModel) {
    let text = emit_surface(m);
    let back = parse_surface(&text).unwrap_or_else(|e| panic!("{name}: {e}\n{text}"));
    assert_eq!(&back, m, "{name}");
    assert_eq!(emit_surface(&back), text, "{name}");
}

#[test]
fn surfaces_round_trip_through_the_text_format() {
    let params = AdjointParams::new(rat(1, 10), Rational::zero());
    for (name, text) in mmp_corpus().into_iter().chain(canonical_fixtures()) {
        let m = parse_surface(&text).unwrap();
        round_trip(name, &m);
        let r = run_adjoint_mmp(&m, &params).unwrap();
        round_trip(name, &r.model);
        if r.outcome == MMPOutcome::NefModel {
            round_trip(name, &epsilon_canonical_model(&r, &params).unwrap().model);
        }
    }
}

#[test]
fn contracting_a_blow_up_recovers_the_original_classes() {
    for (name, text) in mmp_corpus() {
        let m = parse_surface(&text).unwrap();
        let r = m.lattice.rank();
        for center in (0..m.points.len())
            .map(BlowUpCenter::Point)
            .chain([BlowUpCenter::Free])
        {
            let Ok(mut b) = blow_up_model(&m, &center) else {
                continue;
            };
            let e = b.lattice.rank() - 1;
            let lift = |c: &folmmp::surface::DivisorClass| {
                let mut c = c.clone();
                c.coeffs.push(Rational::zero());
                c
            };
            for i in 0..r {
                for j in 0..r {
                    let (u, v) = (m.lattice.basis(i), m.lattice.basis(j));
                    assert_eq!(dot(&b, &lift(&u), &lift(&v)), dot(&m, &u, &v), "{name}");
                }
            }
            let e_curve = b
                .curves
                .iter()
                .position(|c| c.class == b.lattice.basis(e))
                .unwrap();
            b.contract(e_curve).unwrap();
            assert_eq!(
                b.pull_back_current(&b.k_f).unwrap(),
                lift(&m.k_f),
                "{name} {center:?}"
            );
            assert_eq!(
                b.pull_back_current(&b.k_x).unwrap(),
                lift(&m.k_x),
                "{name} {center:?}"
            );
        }
    }
}

#[test]
fn mori_fibers_are_primitive_with_square_zero() {
    let params = AdjointParams::new(rat(1, 10), Rational::zero());
    let mut seen = 0;
    for (name, text) in mmp_corpus() {
        let m = parse_surface(&text).unwrap();
        let r = run_adjoint_mmp(&m, &params).unwrap();
        if let MMPOutcome::MoriFiberSpace { fibration: Some(f) } = &r.outcome {
            seen += 1;
            assert!(f.is_integral(), "{name}");
            let g = f.coeffs.iter().fold(num_bigint::BigInt::zero(), |g, c| {
                num_integer::Integer::gcd(&g, c.numer())
            });
            assert_eq!(g, num_bigint::BigInt::one(), "{name}");
            assert!(dot(&r.model, f, f).is_zero(), "{name}");
            let adj = r.model.adjoint_class(&params.epsilon).unwrap();
            assert!(dot(&r.model, &adj, f) < Rational::zero(), "{name}");
        }
    }
    assert!(seen > 0);
}
