use crate::lie::{library, Automorphism, Casimir, LieAlgebra, TwistedSetup};
use crate::linalg::Matrix;
use crate::scalar::{coth_shift_series, Scalar};
use crate::series::{matrix, SeriesMap};
use crate::tensor::kernels;

use super::am::check_antisymmetric;
use super::{DynamicalRMatrix, RMatrixError};

/// `r_B` together with the eigenbasis it is expressed in.
#[derive(Debug, Clone)]
pub struct TwistedRMatrix<F: Scalar> {
    pub setup: TwistedSetup<F>,
    pub rmatrix: DynamicalRMatrix<F>,
}

impl<F: Scalar> TwistedRMatrix<F> {
    /// `r_B` in the basis of the input algebra (`P r Pᵀ`). The variables are
    /// still the coordinates along the eigenbasis of `g_0`.
    pub fn in_original_basis(&self) -> SeriesMap<F> {
        to_basis(self.rmatrix.series(), &self.setup.change_of_basis)
    }

    /// Every nonzero entry pairs degrees `i + j ≡ 0 (mod n)`.
    pub fn respects_grading(&self) -> bool {
        let deg = &self.setup.degrees;
        let d = deg.len();
        let n = self.setup.order;
        self.rmatrix.series().terms().all(|(_, c)| {
            c.iter().enumerate().all(|(flat, x)| x.is_zero() || (deg[flat / d] + deg[flat % d]).is_multiple_of(n))
        })
    }
}

fn to_basis<F: Scalar>(r: &SeriesMap<F>, p: &Matrix<F>) -> SeriesMap<F> {
    let d = p.rows();
    r.map_coeffs(d * d, |c| {
        let mut out = vec![F::zero(); d * d];
        kernels::conjugate2(p.data(), c, &mut out, d);
        out
    })
}

fn coefficient_table<F: Scalar>(n: u32, trunc: usize) -> Result<Vec<Vec<F>>, RMatrixError> {
    (0..n).map(|j| coth_shift_series::<F>(n, j, trunc).map_err(Into::into)).collect()
}

/// `r_B = Ω/2 + (1⊗ρ̂)Ω` with `ρ̂(A)|_{g_j} = f_j(ad A)`, computed in the
/// eigenbasis of `B`. The variables are coordinates of `λ ∈ g_0*`, and
/// `A = (λ⊗1)Ω ∈ g_0`.
pub fn construct_twisted<F: Scalar>(
    alg: &LieAlgebra<F>,
    casimir: &Casimir<F>,
    b: &Automorphism<F>,
    trunc: usize,
) -> Result<TwistedRMatrix<F>, RMatrixError> {
    let setup = TwistedSetup::new(alg, casimir, b)?;
    let g = &setup.algebra;
    let d = g.dim();
    let omega = setup.casimir.omega().to_matrix();
    if omega.inverse().is_none() {
        return Err(RMatrixError::Precondition("the twisted construction needs a nondegenerate form".into()));
    }
    let n = setup.order;
    let table = coefficient_table::<F>(n, trunc)?;
    let ad_parts: Vec<Matrix<F>> = g.l_indices().iter().map(|&a| g.ad_matrix(omega.row(a))).collect();
    let ad_a = matrix::linear(g.num_vars(), trunc, &ad_parts);
    let mut rho = SeriesMap::zeros(g.num_vars(), trunc, d * d);
    let mut power = matrix::identity(g.num_vars(), trunc, d);
    for m in 0..=trunc {
        if m > 0 {
            power = matrix::matrix_product(&power, &ad_a, d, d, d);
        }
        // D_m Ω with D_m = diag(c_{deg(i), m})
        let mut dm_omega = omega.clone();
        for i in 0..d {
            let c = &table[setup.degrees[i] as usize][m];
            for col in 0..d {
                dm_omega[(i, col)] = dm_omega[(i, col)].mul_ref(c);
            }
        }
        if dm_omega.is_zero() {
            continue;
        }
        rho = rho.add(&power.map_coeffs(d * d, |c| Matrix::from_flat(d, d, c.to_vec()).mul(&dm_omega).transpose().into_data()));
    }
    check_antisymmetric(&rho, d)?;
    let r = SeriesMap::constant(g.num_vars(), trunc, setup.casimir.half().into_data()).add(&rho);
    let rmatrix = DynamicalRMatrix::new(r, setup.casimir.omega().clone());
    Ok(TwistedRMatrix { setup, rmatrix })
}

/// Both sides of the cyclic identity for `g = h^{⊕n}` and `B` the cyclic
/// shift: `construct_twisted` (moved back to the copy basis) and a direct
/// evaluation `ρ̂ = Σ_j E_j ⊗ f_j(ad_h a)`, where `A = (a, …, a)` and
/// `E_j = (1/n) Σ_s ζ^{−js} S^s` projects onto the `ζ^j`-eigenspace of the
/// copy permutation `S`.
pub fn cyclic_oracle<F: Scalar>(
    h: &LieAlgebra<F>,
    h_casimir: &Casimir<F>,
    n: usize,
    trunc: usize,
) -> Result<(SeriesMap<F>, SeriesMap<F>), RMatrixError> {
    let k = h.dim();
    let d = n * k;
    let (g, casimir) = library::copies(h, h_casimir, n);
    let g = g.with_subalgebra((0..d).collect())?;
    let tw = construct_twisted(&g, &casimir, &library::cyclic_shift(k, n), trunc)?;
    let twisted = tw.in_original_basis();

    let setup = &tw.setup;
    let p = &setup.change_of_basis;
    let omega_new = setup.casimir.omega().to_matrix();
    let num_vars = setup.algebra.num_vars();
    let mut ad_parts = Vec::with_capacity(num_vars);
    for &a in setup.algebra.l_indices() {
        let big = p.apply(omega_new.row(a));
        for c in 1..n {
            if big[c * k..(c + 1) * k] != big[0..k] {
                return Err(RMatrixError::Precondition("A is not diagonal in the copies".into()));
            }
        }
        ad_parts.push(h.ad_matrix(&big[0..k]));
    }
    let x = matrix::linear(num_vars, trunc, &ad_parts);
    let table = coefficient_table::<F>(n as u32, trunc)?;
    let proj = |j: usize, c: usize, c2: usize| -> F {
        let e = ((n - j % n) * ((c + n - c2) % n)) % n;
        F::root_of_unity(n as u32, e as u32).expect("field contains the roots of unity").mul_ref(&F::from_ratio(1, n as i64))
    };
    let omega = casimir.omega().to_matrix();
    let mut rho = SeriesMap::zeros(num_vars, trunc, d * d);
    let mut power = matrix::identity(num_vars, trunc, k);
    for m in 0..=trunc {
        if m > 0 {
            power = matrix::matrix_product(&power, &x, k, k, k);
        }
        let mut gm = Matrix::<F>::zeros(n, n);
        for (j, coeffs) in table.iter().enumerate() {
            for c in 0..n {
                for c2 in 0..n {
                    gm[(c, c2)].add_mul_assign(&coeffs[m], &proj(j, c, c2));
                }
            }
        }
        if gm.is_zero() {
            continue;
        }
        rho = rho.add(&power.map_coeffs(d * d, |xm| {
            let mut hat = Matrix::zeros(d, d);
            for c in 0..n {
                for c2 in 0..n {
                    if gm[(c, c2)].is_zero() {
                        continue;
                    }
                    for a in 0..k {
                        for b in 0..k {
                            hat[(c * k + a, c2 * k + b)] = gm[(c, c2)].mul_ref(&xm[a * k + b]);
                        }
                    }
                }
            }
            hat.mul(&omega).transpose().into_data()
        }));
    }
    let oracle = SeriesMap::constant(num_vars, trunc, casimir.half().into_data()).add(&rho);
    Ok((twisted, oracle))
}
