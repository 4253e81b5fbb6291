//! Property tests over pseudorandom inputs. Exact arithmetic is slow, so the
//! algebraic cases run few iterations on small truncations.

mod common;

use common::{q, random_chi, random_rational};
use dynr::gauge::{compose, gauge_equivalize, gauge_transform, GaugeElement, GaugeError};
use dynr::lie::{library, LieAlgebra};
use dynr::moduli::{extension_rhs, solve_extension, t_omega_residual, z_term, ModuliPoint};
use dynr::rmatrix::{cdybe_residual, construct_am_subalgebra, construct_twisted, verify, TwistedRMatrix};
use dynr::scalar::{coth_shift_series, Cyclotomic, Rational, Scalar};
use dynr::series::{Monomial, OneFormSeries, SeriesMap};
use dynr::tensor::Tensor2;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

type Q = Rational;
type C5 = Cyclotomic<5>;

fn arb_rational() -> impl Strategy<Value = Q> {
    (-50i64..=50, 1i64..=12).prop_map(|(p, d)| Q::new(p, d))
}

fn arb_cyclotomic() -> impl Strategy<Value = C5> {
    proptest::collection::vec(arb_rational(), C5::degree()).prop_map(|c| C5::from_coords(c).unwrap())
}

fn field_axioms<F: Scalar>(a: F, b: F, c: F) {
    assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
    assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
    assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
    assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
    assert!((a.clone() - a.clone()).is_zero());
    if !a.is_zero() {
        assert_eq!(a.clone() * a.inverse().unwrap(), F::one());
    } else {
        assert!(a.inverse().is_err());
    }
}

/// r_B for the swap on sl2 ⊕ sl2 through degree 4, built once.
fn swap() -> &'static TwistedRMatrix<Q> {
    static CELL: OnceLock<TwistedRMatrix<Q>> = OnceLock::new();
    CELL.get_or_init(|| {
        let (g, c) = library::sl2_sum::<Q>();
        construct_twisted(&g, &c, &library::swap_automorphism(3), 4).unwrap()
    })
}

fn ef(alg: &LieAlgebra<Q>) -> Tensor2<Q> {
    Tensor2::wedge(&alg.basis_vector(0), &alg.basis_vector(1))
}

proptest! {
    #[test]
    fn rational_field_axioms(a in arb_rational(), b in arb_rational(), c in arb_rational()) {
        field_axioms(a, b, c);
    }

    #[test]
    fn cyclotomic_field_axioms(a in arb_cyclotomic(), b in arb_cyclotomic(), c in arb_cyclotomic()) {
        field_axioms(a, b, c);
    }

    #[test]
    fn coth_series_of_order_one_is_odd(k in 0usize..=12) {
        let s = coth_shift_series::<Q>(1, 0, k).unwrap();
        for (i, x) in s.iter().enumerate().step_by(2) {
            prop_assert!(x.is_zero(), "coefficient {i} is {x}");
        }
    }

    #[test]
    fn coth_constant_term_closed_form(j in 1u32..5) {
        let z = C5::root_of_unity(5, j).unwrap();
        let expected = -(z.clone() + C5::one()) * (z - C5::one()).inverse().unwrap() * C5::from_ratio(1, 2);
        prop_assert_eq!(coth_shift_series::<C5>(5, j, 0).unwrap()[0].clone(), expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 4, ..ProptestConfig::default() })]

    #[test]
    fn gauges_preserve_solutions_and_compose(seed in any::<u64>()) {
        let tw = swap();
        let alg = &tw.setup.algebra;
        let r = tw.rmatrix.series();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g1 = GaugeElement::new(alg, random_chi(alg, 1, 5, &mut rng)).unwrap();
        let g2 = GaugeElement::new(alg, random_chi(alg, 1, 5, &mut rng)).unwrap();
        let rg = gauge_transform(alg, r, &g1);
        prop_assert!(verify(alg, tw.setup.casimir.omega(), &rg).passed());
        prop_assert_eq!(gauge_transform(alg, &rg, &g2), gauge_transform(alg, r, &compose(alg, &g1, &g2)));
    }

    #[test]
    fn gauges_fix_a_block_form_base_point(seed in any::<u64>()) {
        // r(0) = Ω/2 + t(0) with t(0) ∈ Λ²m, and valuation-1 gauges keep it
        let (alg, cas) = library::sl2_cartan::<Q>();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = ModuliPoint::new(&alg, &cas, cas.half().add(&ef(&alg).scale(&random_rational(&mut rng)))).unwrap();
        let r = solve_extension(&alg, &cas, &x, 4).unwrap().rmatrix.series().clone();
        let g = GaugeElement::new(&alg, random_chi(&alg, 1, 5, &mut rng)).unwrap();
        prop_assert_eq!(gauge_transform(&alg, &r, &g).constant_term(), r.constant_term());
    }

    #[test]
    fn extension_is_unique_and_tangent_along_lines(p in -6i64..=6, d in 1i64..=4, e in -3i64..=3) {
        let (alg, cas) = library::sl2_cartan::<Q>();
        let x = ModuliPoint::new(&alg, &cas, cas.half().add(&ef(&alg).scale(&q(p, d)))).unwrap();
        let a = solve_extension(&alg, &cas, &x, 4).unwrap();
        let b = solve_extension(&alg, &cas, &x, 4).unwrap();
        prop_assert_eq!(&a.t, &b.t);
        let line = a.t.substitute_line(&[q(e, 1)]);
        prop_assert!(t_omega_residual(&alg, &cas, &line).is_zero());
    }

    #[test]
    fn residual_and_per_variable_system_agree(p in -6i64..=6, kick in 1usize..=3, c in 1i64..=5) {
        // the solver output satisfies both; adding c·λ^kick e∧f breaks both
        let (alg, cas) = library::sl2_cartan::<Q>();
        let x = ModuliPoint::new(&alg, &cas, cas.half().add(&ef(&alg).scale(&q(p, 2)))).unwrap();
        let trunc = 4;
        let ext = solve_extension(&alg, &cas, &x, trunc).unwrap();
        let am = construct_am_subalgebra(&alg, &cas, trunc).unwrap();
        let z = z_term(&alg, &cas);
        let system_holds = |t: &SeriesMap<Q>| {
            (1..=trunc).all(|k| {
                let omega = extension_rhs(&alg, t, &am.s, &z, k);
                OneFormSeries::differential(&t.homogeneous(k)).components().iter().zip(omega.components())
                    .all(|(lhs, rhs)| lhs.truncated(k - 1) == *rhs)
            })
        };
        prop_assert!(cdybe_residual(&alg, &am.r.add(&ext.t)).is_zero());
        prop_assert!(system_holds(&ext.t));
        let mut t = ext.t.clone();
        t.add_term(Monomial::from_exponents(vec![kick as u32]), ef(&alg).scale(&q(c, 1)).data());
        prop_assert!(!cdybe_residual(&alg, &am.r.add(&t)).is_zero());
        prop_assert!(!system_holds(&t));
    }

    #[test]
    fn distinct_moduli_points_are_not_gauge_related(a in -4i64..=4, b in -4i64..=4) {
        prop_assume!(a != b);
        let (alg, cas) = library::sl2_cartan::<Q>();
        let point = |c: i64| ModuliPoint::new(&alg, &cas, cas.half().add(&ef(&alg).scale(&q(c, 1)))).unwrap();
        let ra = solve_extension(&alg, &cas, &point(a), 3).unwrap();
        let rb = solve_extension(&alg, &cas, &point(b), 3).unwrap();
        let err = gauge_equivalize(&alg, ra.rmatrix.series(), rb.rmatrix.series()).unwrap_err();
        prop_assert!(matches!(err, GaugeError::BasePointMismatch), "{err}");
    }
}
