use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::lie::library;
use crate::rmatrix::{cdybe_residual, construct_am, construct_twisted, verify};
use crate::scalar::Rational;
use crate::series::{equivariant_homogeneous, Monomial};

fn q(p: i64, d: i64) -> Rational {
    Rational::new(p, d)
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    q(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

/// A random equivariant `χ` with valuation `min_deg`, through `trunc`.
fn random_chi(alg: &LieAlgebra<Rational>, min_deg: usize, trunc: usize, rng: &mut ChaCha8Rng) -> SeriesMap<Rational> {
    let mut chi = SeriesMap::zeros(alg.num_vars(), trunc, alg.dim());
    for k in min_deg..=trunc {
        for b in equivariant_homogeneous(alg, 1, k, trunc) {
            chi = chi.add(&b.scale(&random_rational(rng)));
        }
    }
    chi
}

fn sl2_defining(v: &[Rational]) -> Matrix<Rational> {
    // basis e, f, h of sl2
    let mut m = Matrix::zeros(2, 2);
    m[(0, 1)] = v[0].clone();
    m[(1, 0)] = v[1].clone();
    m[(0, 0)] = v[2].clone();
    m[(1, 1)] = -v[2].clone();
    m
}

#[test]
fn eta_matches_matrix_logarithmic_derivative() {
    // g = e^χ with χ = λ_0 h + λ_1 e (l = sl2 as variables); compare
    // g^{-1}∂_i g in the defining representation through degree 3
    let (alg, _) = library::sl2::<Rational>();
    let mut chi = SeriesMap::zeros(3, 4, 3);
    chi.add_term(Monomial::var(3, 0), &[q(0, 1), q(0, 1), q(1, 1)]);
    chi.add_term(Monomial::var(3, 1), &[q(1, 1), q(0, 1), q(0, 1)]);
    chi.add_term(Monomial::from_exponents(vec![1, 0, 1]), &[q(0, 1), q(2, 1), q(0, 1)]);
    let eta = eta_of(&alg, &chi);
    // group element as a 2×2 matrix series: Σ χ^k/k!
    let to2 = |s: &SeriesMap<Rational>| s.map_coeffs(4, |v| sl2_defining(v).into_data());
    let x = to2(&chi);
    let coeffs: Vec<Rational> = (0..=4).map(Rational::inv_factorial).collect();
    let g = matrix::power_series(&x, 2, &coeffs);
    let neg_coeffs: Vec<Rational> =
        (0..=4).map(|k| if k % 2 == 0 { Rational::inv_factorial(k) } else { -Rational::inv_factorial(k) }).collect();
    let g_inv = matrix::power_series(&x, 2, &neg_coeffs);
    for i in 0..3 {
        let expected = matrix::matrix_product(&g_inv, &g.partial(i), 2, 2, 2).truncated(3);
        assert_eq!(to2(eta.component(i)).truncated(3), expected, "component {i}");
    }
}

#[test]
fn tau_is_antisymmetric() {
    let (alg, _) = library::sl2::<Rational>();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let g = GaugeElement::new(&alg, random_chi(&alg, 1, 4, &mut rng)).unwrap();
    let tau = tau_of(&alg, g.eta());
    assert!(!tau.is_zero());
    for (_, v) in tau.terms() {
        assert!(Tensor2::from_data(3, v.clone()).is_antisymmetric());
    }
}

#[test]
fn rejects_bad_generators() {
    let (alg, _) = library::sl2::<Rational>();
    let c = SeriesMap::constant(3, 3, vec![q(1, 1), q(0, 1), q(0, 1)]);
    assert_eq!(GaugeElement::new(&alg, c), Err(GaugeError::NonzeroAtOrigin));
    // λ ↦ λ_h e is not equivariant
    let bad = SeriesMap::coordinate_times(3, 3, 2, vec![q(1, 1), q(0, 1), q(0, 1)]);
    assert!(matches!(GaugeElement::new(&alg, bad), Err(GaugeError::NotEquivariant { degree: 1 })));
    let wrong = SeriesMap::zeros(2, 3, 3);
    assert!(matches!(GaugeElement::new(&alg, wrong), Err(GaugeError::Shape(_))));
}

#[test]
fn gauge_preserves_solutions_on_sl2() {
    let (alg, c) = library::sl2::<Rational>();
    let r = construct_am(&alg, &c, 5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..3 {
        let g = GaugeElement::new(&alg, random_chi(&alg, 1, 6, &mut rng)).unwrap();
        // χ = f(C)μ on sl2, and such gauges fix r_AM
        let rg = gauge_transform(&alg, r.series(), &g);
        assert_eq!(&rg, r.series());
        let report = verify(&alg, c.omega(), &rg);
        assert!(report.passed(), "{:?}", report.checks().iter().find(|c| !c.passed));
    }
}

#[test]
fn gauge_preserves_solutions_with_proper_subalgebra() {
    let (g, c) = library::sl2_sum::<Rational>();
    let tw = construct_twisted(&g, &c, &library::swap_automorphism(3), 4).unwrap();
    let alg = &tw.setup.algebra;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let h = GaugeElement::new(alg, random_chi(alg, 1, 5, &mut rng)).unwrap();
    let rg = gauge_transform(alg, tw.rmatrix.series(), &h);
    assert_ne!(&rg, tw.rmatrix.series());
    assert!(verify(alg, tw.setup.casimir.omega(), &rg).passed());
}

#[test]
fn composition_matches_successive_gauges() {
    let (alg, c) = library::sl2::<Rational>();
    let r = construct_am(&alg, &c, 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g1 = GaugeElement::new(&alg, random_chi(&alg, 1, 5, &mut rng)).unwrap();
    let g2 = GaugeElement::new(&alg, random_chi(&alg, 1, 5, &mut rng)).unwrap();
    let two_steps = gauge_transform(&alg, &gauge_transform(&alg, r.series(), &g1), &g2);
    let once = gauge_transform(&alg, r.series(), &compose(&alg, &g1, &g2));
    assert_eq!(two_steps, once);
}

#[test]
fn composition_order_with_noncommuting_generators() {
    // l = ℂz central in sl2 ⊕ ℂz: any χ(λ_z) is equivariant
    let (g, _) = library::sl2_plus_center::<Rational>();
    let alg = g.with_subalgebra(vec![3]).unwrap();
    let mut chi1 = SeriesMap::zeros(1, 4, 4);
    chi1.add_term(Monomial::var(1, 0), &[q(1, 1), q(0, 1), q(0, 1), q(0, 1)]);
    let mut chi2 = SeriesMap::zeros(1, 4, 4);
    chi2.add_term(Monomial::var(1, 0), &[q(0, 1), q(1, 1), q(1, 2), q(0, 1)]);
    chi2.add_term(Monomial::from_exponents(vec![2]), &[q(0, 1), q(0, 1), q(1, 1), q(2, 1)]);
    let g1 = GaugeElement::new(&alg, chi1).unwrap();
    let g2 = GaugeElement::new(&alg, chi2).unwrap();
    let mut r = SeriesMap::constant(1, 3, Tensor2::outer(&alg.basis_vector(0), &alg.basis_vector(2)).into_data());
    r.add_term(Monomial::var(1, 0), Tensor2::outer(&alg.basis_vector(1), &alg.basis_vector(3)).data());
    let two_steps = gauge_transform(&alg, &gauge_transform(&alg, &r, &g1), &g2);
    assert_eq!(gauge_transform(&alg, &r, &compose(&alg, &g1, &g2)), two_steps);
    assert_ne!(gauge_transform(&alg, &r, &compose(&alg, &g2, &g1)), two_steps);
}

#[test]
fn identity_gauge_is_trivial() {
    let (alg, c) = library::sl2::<Rational>();
    let r = construct_am(&alg, &c, 4).unwrap();
    let id = GaugeElement::identity(&alg, 5);
    assert_eq!(&gauge_transform(&alg, r.series(), &id), r.series());
}

#[test]
fn constant_twist_commutes_with_residual() {
    // diag(t², t⁻², 1) on (e, f, h) fixes the Cartan subalgebra
    let (alg, c) = library::sl2_cartan::<Rational>();
    let t2 = q(9, 4);
    let mut m = Matrix::identity(3);
    m[(0, 0)] = t2.clone();
    m[(1, 1)] = t2.inverse().unwrap();
    let twist = ConstantTwist::new(&alg, &c, m).unwrap();
    let mut r = SeriesMap::constant(1, 3, c.half().into_data());
    let ef = Tensor2::wedge(&alg.basis_vector(0), &alg.basis_vector(1));
    r.add_term(Monomial::var(1, 0), ef.scale(&q(2, 3)).data());
    r.add_term(Monomial::from_exponents(vec![2]), &Tensor2::outer(&alg.basis_vector(0), &alg.basis_vector(2)).into_data());
    let lhs = cdybe_residual(&alg, &twist.apply(&r));
    let rhs = twist.apply3(&cdybe_residual(&alg, &r));
    assert_eq!(lhs, rhs);
}

#[test]
fn constant_twist_validation() {
    let (alg, c) = library::sl2_cartan::<Rational>();
    let mut moves_h = Matrix::identity(3);
    moves_h[(2, 2)] = q(2, 1);
    assert!(ConstantTwist::new(&alg, &c, moves_h).is_err());
    let mut not_hom = Matrix::identity(3);
    not_hom[(0, 0)] = q(2, 1);
    assert!(ConstantTwist::new(&alg, &c, not_hom).is_err());
}

#[test]
fn normalized_base_point_is_fixed() {
    // already normalized: nothing to do
    let (alg, c) = library::sl2_cartan::<Rational>();
    let base = c.half();
    let r = SeriesMap::constant(1, 4, base.into_data());
    let (g, rg) = normalize_base_point(&alg, &c, &r).unwrap();
    assert!(g.is_identity());
    assert_eq!(rg, r);
}

#[test]
fn normalizing_a_shifted_base_point() {
    // on an abelian algebra with Ω = 1 the linear gauge χ = λ_0 a_1 moves Ω/2 by a_1∧a_0
    let alg = library::abelian::<Rational>(2);
    let c = crate::lie::Casimir::from_form(Matrix::identity(2)).unwrap();
    let r = SeriesMap::constant(2, 4, c.half().into_data());
    let g = GaugeElement::new(&alg, SeriesMap::coordinate_times(2, 5, 0, vec![q(0, 1), q(1, 1)])).unwrap();
    let shifted = gauge_transform(&alg, &r, &g);
    let expected = c.half().add(&Tensor2::wedge(&alg.basis_vector(1), &alg.basis_vector(0)));
    assert_eq!(shifted, SeriesMap::constant(2, 4, expected.into_data()));
    let (_, back) = normalize_base_point(&alg, &c, &shifted).unwrap();
    assert_eq!(back, r);
}

#[test]
fn equivalize_recovers_a_gauge() {
    let (alg, c) = library::sl2::<Rational>();
    let r = construct_am(&alg, &c, 5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = GaugeElement::new(&alg, random_chi(&alg, 2, 6, &mut rng)).unwrap();
    let rho = gauge_transform(&alg, r.series(), &g);
    let found = gauge_equivalize(&alg, r.series(), &rho).unwrap();
    assert_eq!(gauge_transform(&alg, r.series(), &found).truncated(4), rho.truncated(4));
}

#[test]
fn equivalize_with_proper_subalgebra() {
    let (g, c) = library::sl2_sum::<Rational>();
    let tw = construct_twisted(&g, &c, &library::swap_automorphism(3), 4).unwrap();
    let alg = &tw.setup.algebra;
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let h = GaugeElement::new(alg, random_chi(alg, 2, 5, &mut rng)).unwrap();
    let r = tw.rmatrix.series();
    let rho = gauge_transform(alg, r, &h);
    let found = gauge_equivalize(alg, r, &rho).unwrap();
    assert_eq!(gauge_transform(alg, r, &found).truncated(3), rho.truncated(3));
}

#[test]
fn equivalize_rejects_inequivalent() {
    let (alg, c) = library::sl2::<Rational>();
    let r = construct_am(&alg, &c, 4).unwrap();
    let constant = SeriesMap::constant(3, 4, c.half().into_data());
    assert!(gauge_equivalize(&alg, r.series(), &constant).is_err());
    let other = SeriesMap::constant(3, 4, c.omega().clone().into_data());
    assert_eq!(gauge_equivalize(&alg, r.series(), &other), Err(GaugeError::BasePointMismatch));
}

#[test]
fn equivalize_fails_on_xu() {
    // two antisymmetric series with the same base point; the l⊗m part of the
    // linear difference gives a non-equivariant primitive
    let alg = library::xu::<Rational>();
    let w = |a: usize, b: usize| Tensor2::wedge(&alg.basis_vector(a), &alg.basis_vector(b));
    let r = SeriesMap::zeros(1, 3, 4);
    let mut rho = r.clone();
    rho.add_term(Monomial::var(1, 0), w(0, 1).data());
    assert!(cdybe_residual(&alg, &rho).is_zero());
    assert!(matches!(gauge_equivalize(&alg, &r, &rho), Err(GaugeError::NotEquivariant { .. })));
}

#[test]
fn block_form_of_am_is_trivial() {
    let (alg, c) = library::sl2::<Rational>();
    let r = construct_am(&alg, &c, 4).unwrap();
    let red = reduce_block_form(&alg, &c, r.series()).unwrap();
    assert!(red.t.is_zero());
    assert!(red.gauge.is_identity());
}

#[test]
fn block_form_of_gauged_swap() {
    let (g, c) = library::sl2_sum::<Rational>();
    let tw = construct_twisted(&g, &c, &library::swap_automorphism(3), 4).unwrap();
    let alg = &tw.setup.algebra;
    let cas = &tw.setup.casimir;
    let r = tw.rmatrix.series();
    let direct = reduce_block_form(alg, cas, r).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let h = GaugeElement::new(alg, random_chi(alg, 1, 5, &mut rng)).unwrap();
    let moved = gauge_transform(alg, r, &h);
    let red = reduce_block_form(alg, cas, &moved).unwrap();
    assert_eq!(gauge_transform(alg, &moved, &red.gauge).truncated(3), red.reduced);
    // t is determined by t(0) up to the residual l-symmetries, here none
    assert_eq!(red.t.truncated(2), direct.t.truncated(2));
    assert!(verify(alg, cas.omega(), &red.reduced).passed());
}
