use crate::lie::{omega_ideal, Casimir, LieAlgebra};
use crate::linalg::Matrix;
use crate::scalar::{coth_shift_series, Scalar};
use crate::series::{matrix, SeriesMap};
use crate::tensor::Tensor2;

use super::{DynamicalRMatrix, RMatrixError};

/// `r_AM = Ω/2 + f(ad μ)`, `f(s) = 1/s − coth(s/2)/2`, for `l = g`.
///
/// The point `λ ∈ D ⊂ g*` is restricted to `g_Ω` and identified with
/// `μ ∈ g_Ω` through `Ω`; `f(ad μ) ∈ End(g_Ω)` becomes an element of
/// `g_Ω⊗g_Ω` by `T ↦ (1⊗T)Ω`. With `Alt` as in [`crate::tensor::kernels::alt_into`]
/// this is the orientation that solves the equation; `(T⊗1)Ω` is its negative.
pub fn construct_am<F: Scalar>(
    alg: &LieAlgebra<F>,
    casimir: &Casimir<F>,
    trunc: usize,
) -> Result<DynamicalRMatrix<F>, RMatrixError> {
    let d = alg.dim();
    if alg.num_vars() != d {
        return Err(RMatrixError::Precondition("construct_am needs l = g".into()));
    }
    let ideal = omega_ideal(alg, casimir)?;
    let k = ideal.dim();
    let mut r = SeriesMap::constant(d, trunc, casimir.half().into_data());
    if k == 0 {
        return Ok(DynamicalRMatrix::new(r, casimir.omega().clone()));
    }
    let ad_parts: Vec<Matrix<F>> = alg
        .l_indices()
        .iter()
        .map(|&a| {
            let psi = ideal.restrict_covector(&alg.basis_vector(a));
            let mu = ideal.include(&ideal.dual_to_ideal(&psi));
            let cols: Vec<Vec<F>> = ideal
                .basis()
                .iter()
                .map(|v| ideal.coordinates(&alg.bracket(&mu, v)).expect("g_Omega is an ideal"))
                .collect();
            Matrix::from_columns(&cols, k)
        })
        .collect();
    let ad_mu = matrix::linear(d, trunc, &ad_parts);
    let f = coth_shift_series::<F>(1, 0, trunc)?;
    let t = matrix::power_series(&ad_mu, k, &f);
    let v = Matrix::from_columns(ideal.basis(), d);
    let wvt = ideal.gram().mul(&v.transpose());
    let rho = t.map_coeffs(d * d, |c| v.mul(&Matrix::from_flat(k, k, c.to_vec())).mul(&wvt).transpose().into_data());
    check_antisymmetric(&rho, d)?;
    r = r.add(&rho);
    Ok(DynamicalRMatrix::new(r, casimir.omega().clone()))
}

pub(super) fn check_antisymmetric<F: Scalar>(rho: &SeriesMap<F>, d: usize) -> Result<(), RMatrixError> {
    for (m, c) in rho.terms() {
        if !Tensor2::from_data(d, c.clone()).is_antisymmetric() {
            return Err(RMatrixError::NotAntisymmetric(m.degree()));
        }
    }
    Ok(())
}

/// `r^l_AM + Ω_m/2` and `s = r^l_AM − Ω_l/2`, with `r^l_AM` built inside `l`
/// from `Ω_l` and embedded into `g⊗g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubalgebraAm<F: Scalar> {
    pub r: SeriesMap<F>,
    pub s: SeriesMap<F>,
}

pub fn construct_am_subalgebra<F: Scalar>(
    alg: &LieAlgebra<F>,
    casimir: &Casimir<F>,
    trunc: usize,
) -> Result<SubalgebraAm<F>, RMatrixError> {
    let d = alg.dim();
    let l = alg.l_indices().to_vec();
    let sub = alg.subalgebra_l()?;
    let omega_l = casimir.omega_l_matrix(alg);
    let sub_casimir = Casimir::new(Tensor2::from_matrix(&omega_l));
    let r_l = construct_am(&sub, &sub_casimir, trunc)?;
    let n = l.len();
    let half_l = SeriesMap::constant(n, trunc, sub_casimir.half().into_data());
    let s_l = r_l.series().sub(&half_l);
    let s = s_l.map_coeffs(d * d, |c| {
        let mut out = vec![F::zero(); d * d];
        for p in 0..n {
            for q in 0..n {
                out[l[p] * d + l[q]] = c[p * n + q].clone();
            }
        }
        out
    });
    let blocks = casimir.omega_l(alg).add(&casimir.omega_m(alg)).scale(&F::from_ratio(1, 2));
    let r = s.add(&SeriesMap::constant(n, trunc, blocks.into_data()));
    Ok(SubalgebraAm { r, s })
}
