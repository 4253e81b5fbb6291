#![allow(dead_code)]

use dynr::lie::{Casimir, LieAlgebra};
use dynr::linalg::Matrix;
use dynr::rmatrix::{cdybe_residual, construct_am_subalgebra};
use dynr::scalar::{Rational, Scalar};
use dynr::series::{equivariant_homogeneous, Monomial, SeriesMap};
use dynr::tensor::Tensor2;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn q(p: i64, d: i64) -> Rational {
    Rational::new(p, d)
}

pub fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    q(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

/// A random equivariant `χ` of valuation at least `min_deg`, through `trunc`.
pub fn random_chi(alg: &LieAlgebra<Rational>, min_deg: usize, trunc: usize, rng: &mut ChaCha8Rng) -> SeriesMap<Rational> {
    let mut chi = SeriesMap::zeros(alg.num_vars(), trunc, alg.dim());
    for k in min_deg..=trunc {
        for b in equivariant_homogeneous(alg, 1, k, trunc) {
            chi = chi.add(&b.scale(&random_rational(rng)));
        }
    }
    chi
}

/// Random series `D → Λ²g` through `trunc`.
pub fn random_wedge_series(alg: &LieAlgebra<Rational>, trunc: usize, rng: &mut ChaCha8Rng) -> SeriesMap<Rational> {
    let d = alg.dim();
    let r = alg.num_vars();
    let mut s = SeriesMap::zeros(r, trunc, d * d);
    for k in 0..=trunc {
        for m in Monomial::of_degree(r, k) {
            for a in 0..d {
                for b in a + 1..d {
                    let w = Tensor2::wedge(&alg.basis_vector(a), &alg.basis_vector(b)).scale(&random_rational(rng));
                    s.add_term(m.clone(), w.data());
                }
            }
        }
    }
    s
}

/// Degree by degree, solves the linear equations `[residual]_{k−1} = 0` for
/// an unknown homogeneous `t_k: D → Λ²m`, independently of the recursion.
/// Panics unless every degree has a unique solution.
pub fn brute_force(alg: &LieAlgebra<Rational>, c: &Casimir<Rational>, t0: &Tensor2<Rational>, trunc: usize) -> SeriesMap<Rational> {
    let d = alg.dim();
    let r = alg.num_vars();
    let am = construct_am_subalgebra(alg, c, trunc).unwrap();
    let m = alg.m_indices();
    let mut t = SeriesMap::constant(r, trunc, t0.data().to_vec());
    for k in 1..=trunc {
        let mut unknowns = Vec::new();
        for mono in Monomial::of_degree(r, k) {
            for (i, &a) in m.iter().enumerate() {
                for &b in &m[i + 1..] {
                    let w = Tensor2::wedge(&alg.basis_vector(a), &alg.basis_vector(b));
                    unknowns.push(SeriesMap::from_terms(r, trunc, d * d, [(mono.clone(), w.into_data())]));
                }
            }
        }
        let residual = |t: &SeriesMap<Rational>| cdybe_residual(alg, &am.r.add(t).truncated(k)).homogeneous(k - 1);
        let base = residual(&t);
        let columns: Vec<SeriesMap<Rational>> = unknowns.iter().map(|u| residual(&t.add(u)).sub(&base)).collect();
        let monos = Monomial::of_degree(r, k - 1);
        let rows = monos.len() * d * d * d;
        let mut a = Matrix::zeros(rows, unknowns.len());
        let mut rhs = vec![Rational::zero(); rows];
        for (mi, mono) in monos.iter().enumerate() {
            let b = base.coeff_or_zero(mono);
            for e in 0..d * d * d {
                rhs[mi * d * d * d + e] = -b[e].clone();
                for (j, col) in columns.iter().enumerate() {
                    a[(mi * d * d * d + e, j)] = col.coeff_or_zero(mono)[e].clone();
                }
            }
        }
        assert_eq!(a.rank(), unknowns.len(), "degree {k} is not uniquely determined");
        let sol = a.solve(&rhs).expect("brute-force system is consistent");
        for (u, x) in unknowns.iter().zip(&sol) {
            t = t.add(&u.scale(x));
        }
    }
    t
}
