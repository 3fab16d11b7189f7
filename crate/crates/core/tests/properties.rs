mod common;

use common::{dot, mmp_corpus};
use folmmp::exact::{
    continued_fraction, hirzebruch_jung, hirzebruch_jung_value, parse_rational, rat, BivariatePolynomial,
};
use folmmp::germ::VectorFieldGerm;
use folmmp::mmp::run_adjoint_mmp;
use folmmp::quotient::{quotient_resolution, CyclicQuotientGerm};
use folmmp::restree::{adjoint_lc_check, AdjointParams, AdjointVerdict};
use folmmp::surface::{parse_surface, DivisorClass, FoliatedSurfaceModel};
use folmmp::Rational;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;
use std::sync::OnceLock;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-1000i64..=1000, 1i64..=200).prop_map(|(n, d)| rat(n, d))
}

fn poly(max_degree: u32) -> impl Strategy<Value = BivariatePolynomial> {
    prop::collection::vec(((0..=max_degree, 0..=max_degree), -3i64..=3), 0..5).prop_map(|terms| {
        BivariatePolynomial::from_terms(
            terms
                .into_iter()
                .map(|(e, c)| (e, Rational::from_integer(c.into()))),
        )
    })
}

/// Coprime `p > q >= 1` with `p <= bound`, or `p >= q` when `equal` is set.
fn coprime(bound: u64, equal: bool) -> impl Strategy<Value = (u64, u64)> {
    (2u64..=bound)
        .prop_flat_map(move |p| (Just(p), 1u64..=if equal { p } else { p - 1 }))
        .prop_filter("coprime", |(p, q)| p.gcd(q) == 1)
}

/// Models after an MMP run that contracted at least one curve.
fn contracted_models() -> &'static [FoliatedSurfaceModel] {
    static MODELS: OnceLock<Vec<FoliatedSurfaceModel>> = OnceLock::new();
    MODELS.get_or_init(|| {
        let params = AdjointParams::new(rat(1, 10), Rational::one());
        mmp_corpus()
            .into_iter()
            .filter_map(|(_, text)| {
                let m = parse_surface(&text).ok()?;
                let r = run_adjoint_mmp(&m, &params).ok()?;
                (!r.model.contracted.is_empty()).then_some(r.model)
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn continued_fraction_round_trips((p, q) in coprime(10_000, true)) {
        let cf = continued_fraction(p, q).unwrap();
        prop_assert_eq!(cf.value(), rat(p as i64, q as i64));
        let d = cf.digits();
        if d.len() > 1 {
            prop_assert!(*d.last().unwrap() >= 2);
            prop_assert!(d[1..].iter().all(|&a| a >= 1));
        }
    }

    #[test]
    fn hirzebruch_jung_round_trips((m, b) in coprime(500, false)) {
        let hj = hirzebruch_jung(m, b).unwrap();
        prop_assert!(hj.iter().all(|&c| c >= 2));
        prop_assert_eq!(hirzebruch_jung_value(&hj), rat(m as i64, b as i64));
    }

    #[test]
    fn rationals_are_exact(a in small_rational(), b in small_rational()) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        if !b.is_zero() {
            prop_assert_eq!(&(&a * &b) / &b, a.clone());
        }
        prop_assert_eq!(parse_rational(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn saturation_is_idempotent(a in poly(3), b in poly(3), h in poly(1)) {
        prop_assume!(!a.is_zero() && !b.is_zero() && !h.is_zero());
        let g = VectorFieldGerm::new(&a * &h, &b * &h);
        prop_assume!(g.is_ok());
        let s = g.unwrap().saturate();
        prop_assert!(s.is_saturated());
        prop_assert_eq!(s.saturate(), s);
    }

    #[test]
    fn diagonal_blow_up_has_two_reduced_points(p in 1i64..=40, q in 1i64..=40) {
        prop_assume!(p != q);
        let bu = VectorFieldGerm::linear_diagonal(p, q).blow_up().unwrap();
        prop_assert_eq!(bu.singular_points.len(), 2);
        let mut got: Vec<Rational> = bu
            .singular_points
            .iter()
            .map(|pt| {
                let m = bu.germ_at(pt).linear_part().matrix;
                assert!(m.get(0, 1).is_zero() && m.get(1, 0).is_zero());
                m.get(1, 1) / m.get(0, 0)
            })
            .collect();
        got.sort();
        let mut want = vec![rat(q - p, p), rat(p - q, q)];
        want.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn certification_is_monotone_in_epsilon(k in 2u32..=4, c in -2i64..=2, n in 2u32..=3) {
        let a = &BivariatePolynomial::y() + &BivariatePolynomial::monomial(n, 0, Rational::from_integer(c.into()));
        let b = BivariatePolynomial::monomial(k, 0, Rational::one());
        let g = VectorFieldGerm::new(a, b).unwrap();
        let grid = [rat(1, 100), rat(1, 20), rat(1, 10), rat(1, 7), rat(1, 6)];
        let certified: Vec<bool> = grid
            .iter()
            .map(|e| {
                let v = adjoint_lc_check(&g, &[], &AdjointParams::new(e.clone(), Rational::one())).unwrap();
                assert!(!matches!(v, AdjointVerdict::Inconclusive(_)));
                v == AdjointVerdict::Certified
            })
            .collect();
        prop_assert!(certified.windows(2).all(|w| !w[0] || w[1]), "{:?}", certified);
    }

    #[test]
    fn quotient_chain_satisfies_adjunction((m, b) in coprime(60, false)) {
        let res = quotient_resolution(&CyclicQuotientGerm::new(m, b).unwrap()).unwrap();
        let g = res.intersection_matrix();
        for (i, e) in res.chain.iter().enumerate() {
            let lhs = res
                .chain
                .iter()
                .enumerate()
                .fold(Rational::zero(), |s, (j, f)| s + g.get(i, j) * &f.a_var);
            prop_assert_eq!(lhs, Rational::from_integer((-2 - e.self_intersection).into()));
        }
    }

    #[test]
    fn push_is_an_orthogonal_projection(
        pick in any::<prop::sample::Index>(),
        a in prop::collection::vec(-6i64..=6, 12),
        b in prop::collection::vec(-6i64..=6, 12),
    ) {
        let models = contracted_models();
        let m = &models[pick.index(models.len())];
        let r = m.lattice.rank();
        let (a, b) = (DivisorClass::from_integers(&a[..r]), DivisorClass::from_integers(&b[..r]));
        let pa = m.pull_back_current(&a).unwrap();
        let pb = m.pull_back_current(&b).unwrap();
        prop_assert_eq!(m.pull_back_current(&pa).unwrap(), pa.clone());
        prop_assert_eq!(dot(m, &pa, &b), dot(m, &a, &pb));
        prop_assert_eq!(dot(m, &pa, &b), dot(m, &pa, &pb));
        for &j in &m.contracted {
            prop_assert!(dot(m, &pa, &m.curves[j].class).is_zero());
        }
    }
}
