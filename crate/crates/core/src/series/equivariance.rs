use crate::lie::LieAlgebra;
use crate::scalar::Scalar;
use crate::tensor::kernels;

use super::SeriesMap;

/// The linear function `λ ↦ ⟨λ, v⟩ = ⟨λ, π(v)⟩` as a scalar series.
pub fn pairing_series<F: Scalar>(alg: &LieAlgebra<F>, v: &[F], trunc: usize) -> SeriesMap<F> {
    let r = alg.num_vars();
    let mut s = SeriesMap::zeros(r, trunc, 1);
    for (p, c) in alg.project_to_l(v).into_iter().enumerate() {
        s.add_term(super::Monomial::var(r, p), &[c]);
    }
    s
}

/// `[Δ_k(y), a] − Σ_l ⟨λ, [x_l, y]⟩ ∂_l a` for `a: D → g^{⊗k}`, `k ∈ {1, 2, 3}`,
/// and `y` a basis vector of `l`. Vanishes for all `y` exactly when `a` is
/// `l`-equivariant.
pub fn equivariance_defect<F: Scalar>(alg: &LieAlgebra<F>, a: &SeriesMap<F>, legs: usize, y: usize) -> SeriesMap<F> {
    let d = alg.dim();
    assert_eq!(a.target_dim(), d.pow(legs as u32), "target must be g^{{⊗{legs}}}");
    assert!(alg.in_l(y), "y must be a basis vector of l");
    let yv = alg.basis_vector(y);
    let act = a.map_coeffs(a.target_dim(), |v| {
        let mut out = vec![F::zero(); v.len()];
        match legs {
            1 => {
                let b = alg.bracket(&yv, v);
                out.clone_from_slice(&b);
            }
            2 => kernels::adjoint_action2(alg, &yv, v, &mut out),
            3 => kernels::adjoint_action3(alg, &yv, v, &mut out),
            _ => panic!("equivariance_defect supports 1 to 3 legs"),
        }
        out
    });
    if a.trunc() == 0 {
        return act;
    }
    let mut transport = SeriesMap::zeros(a.num_vars(), a.trunc(), a.target_dim());
    for (l, &xl) in alg.l_indices().iter().enumerate() {
        let br = alg.bracket(&alg.basis_vector(xl), &yv);
        let dl = a.partial(l);
        for (p, c) in alg.project_to_l(&br).into_iter().enumerate() {
            if !c.is_zero() {
                transport = transport.add(&dl.mul_coord(p).scale(&c));
            }
        }
    }
    act.sub(&transport)
}

/// `equivariance_defect` vanishes for every basis vector of `l`.
pub fn is_equivariant<F: Scalar>(alg: &LieAlgebra<F>, a: &SeriesMap<F>, legs: usize) -> bool {
    alg.l_indices().iter().all(|&y| equivariance_defect(alg, a, legs, y).is_zero())
}

/// Basis of the homogeneous degree-`degree` series `D → F^{target_dim}`
/// annihilated by the linear map `op` (truncation `trunc` on the output).
pub fn homogeneous_kernel<F: Scalar>(
    num_vars: usize,
    degree: usize,
    target_dim: usize,
    trunc: usize,
    op: impl Fn(&SeriesMap<F>) -> Vec<SeriesMap<F>>,
) -> Vec<SeriesMap<F>> {
    use std::collections::BTreeMap;
    let monos = super::Monomial::of_degree(num_vars, degree);
    let mut unknowns = Vec::with_capacity(monos.len() * target_dim);
    for m in &monos {
        for k in 0..target_dim {
            let mut v = vec![F::zero(); target_dim];
            v[k] = F::one();
            unknowns.push(SeriesMap::from_terms(num_vars, trunc, target_dim, [(m.clone(), v)]));
        }
    }
    let mut rows: BTreeMap<(usize, super::Monomial, usize), usize> = BTreeMap::new();
    let mut entries: Vec<(usize, usize, F)> = Vec::new();
    for (col, u) in unknowns.iter().enumerate() {
        for (out_idx, image) in op(u).into_iter().enumerate() {
            for (m, v) in image.terms() {
                for (k, x) in v.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let n = rows.len();
                    let row = *rows.entry((out_idx, m.clone(), k)).or_insert(n);
                    entries.push((row, col, x.clone()));
                }
            }
        }
    }
    let mut a = crate::linalg::Matrix::zeros(rows.len().max(1), unknowns.len());
    for (r, c, x) in entries {
        a[(r, c)] = x;
    }
    a.nullspace()
        .into_iter()
        .map(|v| {
            let mut s = SeriesMap::zeros(num_vars, trunc, target_dim);
            for (c, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    s = s.add(&unknowns[c].scale(x));
                }
            }
            s
        })
        .collect()
}

/// Basis of the `l`-equivariant homogeneous maps `D → g^{⊗legs}` of the given degree.
pub fn equivariant_homogeneous<F: Scalar>(
    alg: &LieAlgebra<F>,
    legs: usize,
    degree: usize,
    trunc: usize,
) -> Vec<SeriesMap<F>> {
    let dim = alg.dim().pow(legs as u32);
    homogeneous_kernel(alg.num_vars(), degree, dim, trunc, |a| {
        alg.l_indices().iter().map(|&y| equivariance_defect(alg, a, legs, y)).collect()
    })
}
