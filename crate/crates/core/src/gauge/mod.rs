//! Gauge transformations `r ↦ r^g` by `l`-equivariant maps `g = e^χ: D → G`
//! with `g(0) = 1`, constant twists by automorphisms centralizing `l`, and the
//! constructive normal-form procedures built on them.

mod bch;
mod equivalize;
mod reduce;

use thiserror::Error;

use crate::lie::{Casimir, LieAlgebra, LieError};
use crate::linalg::Matrix;
use crate::rmatrix::RMatrixError;
use crate::scalar::Scalar;
use crate::series::{equivariance_defect, matrix, pairing_series, ClosednessError, OneFormSeries, SeriesMap};
use crate::tensor::{kernels, Tensor2};

pub use bch::bch;
pub use equivalize::gauge_equivalize;
pub use reduce::{reduce_block_form, BlockReduction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaugeError {
    #[error("gauge generator must vanish at 0")]
    NonzeroAtOrigin,
    #[error("gauge generator is not l-equivariant (defect in degree {degree})")]
    NotEquivariant { degree: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("base points differ")]
    BasePointMismatch,
    #[error("Alt(d̄E) is nonzero for the degree-{degree} defect")]
    AltNonzero { degree: usize },
    #[error("the degree-{degree} defect has a nonzero m⊗m component")]
    MmComponent { degree: usize },
    #[error("defect in degree {degree} remains after the induction")]
    NotEquivalent { degree: usize },
    #[error("block form not reached: {0}")]
    BlockForm(String),
    #[error("invalid constant twist: {0}")]
    InvalidTwist(String),
    #[error(transparent)]
    Closedness(#[from] ClosednessError),
    #[error(transparent)]
    RMatrix(#[from] RMatrixError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// `g = e^χ` with `χ: D → g` equivariant and `χ(0) = 0`. A gauge acting on
/// series known through degree `K` needs `χ` through `K + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugeElement<F: Scalar> {
    chi: SeriesMap<F>,
    ad_exp: SeriesMap<F>,
    eta: OneFormSeries<F>,
}

impl<F: Scalar> GaugeElement<F> {
    pub fn new(alg: &LieAlgebra<F>, chi: SeriesMap<F>) -> Result<Self, GaugeError> {
        if chi.num_vars() != alg.num_vars() || chi.target_dim() != alg.dim() {
            return Err(GaugeError::Shape(format!(
                "chi must map {} variables into a {}-dimensional algebra",
                alg.num_vars(),
                alg.dim()
            )));
        }
        if chi.constant_term().iter().any(|c| !c.is_zero()) {
            return Err(GaugeError::NonzeroAtOrigin);
        }
        for &y in alg.l_indices() {
            if let Some(degree) = equivariance_defect(alg, &chi, 1, y).valuation() {
                return Err(GaugeError::NotEquivariant { degree });
            }
        }
        Ok(Self::unchecked(alg, chi))
    }

    fn unchecked(alg: &LieAlgebra<F>, chi: SeriesMap<F>) -> Self {
        let ad = ad_series(alg, &chi);
        let ad_exp = matrix::exp(&ad, alg.dim());
        let eta = eta_of(alg, &chi);
        GaugeElement { chi, ad_exp, eta }
    }

    pub fn identity(alg: &LieAlgebra<F>, trunc: usize) -> Self {
        Self::unchecked(alg, SeriesMap::zeros(alg.num_vars(), trunc, alg.dim()))
    }

    pub fn chi(&self) -> &SeriesMap<F> {
        &self.chi
    }

    pub fn into_chi(self) -> SeriesMap<F> {
        self.chi
    }

    /// `Ad(e^χ) = exp(ad χ)`, row-major `d × d`.
    pub fn ad_exp(&self) -> &SeriesMap<F> {
        &self.ad_exp
    }

    /// `η_g = g^{-1}dg`
    pub fn eta(&self) -> &OneFormSeries<F> {
        &self.eta
    }

    pub fn trunc(&self) -> usize {
        self.chi.trunc()
    }

    pub fn is_identity(&self) -> bool {
        self.chi.is_zero()
    }
}

/// `ad χ` as a matrix series.
pub fn ad_series<F: Scalar>(alg: &LieAlgebra<F>, chi: &SeriesMap<F>) -> SeriesMap<F> {
    let d = alg.dim();
    chi.map_coeffs(d * d, |v| alg.ad_matrix(v).into_data())
}

/// `η = Σ_{k≥0} (−ad χ)^k dχ / (k+1)!`
pub fn eta_of<F: Scalar>(alg: &LieAlgebra<F>, chi: &SeriesMap<F>) -> OneFormSeries<F> {
    let d = alg.dim();
    let r = chi.num_vars();
    if r == 0 {
        return OneFormSeries::new(vec![]);
    }
    let ad = ad_series(alg, chi).neg();
    let coeffs: Vec<F> = (0..=chi.trunc())
        .map(|k| F::from_rational(&crate::scalar::Rational::inv_factorial(k + 1)))
        .collect();
    let phi = matrix::power_series(&ad, d, &coeffs);
    OneFormSeries::new((0..r).map(|i| matrix::apply(&phi, &chi.partial(i), d, d)).collect())
}

/// `τ(λ) = (λ⊗1⊗1)[η̄^{12}, η̄^{13}] = Σ_{a,b} ⟨λ, [e_{l_a}, e_{l_b}]⟩ η_a ⊗ η_b`
pub fn tau_of<F: Scalar>(alg: &LieAlgebra<F>, eta: &OneFormSeries<F>) -> SeriesMap<F> {
    let d = alg.dim();
    let r = alg.num_vars();
    let trunc = eta.trunc();
    let mut tau = SeriesMap::zeros(r, trunc, d * d);
    let l = alg.l_indices();
    for a in 0..r {
        for b in (a + 1)..r {
            let br = alg.bracket(&alg.basis_vector(l[a]), &alg.basis_vector(l[b]));
            let p = pairing_series(alg, &br, trunc);
            if p.is_zero() {
                continue;
            }
            let wedge = eta.component(a).bilinear(eta.component(b), d * d, |x, y, out| {
                for i in 0..d {
                    for j in 0..d {
                        let v = x[i].mul_ref(&y[j]);
                        out[i * d + j] += &v;
                        out[j * d + i] -= &v;
                    }
                }
            });
            tau = tau.add(&wedge.mul_scalar_series(&p));
        }
    }
    tau
}

/// `(M⊗M)X = M X Mᵀ` for matrix series.
fn conjugate_series<F: Scalar>(m: &SeriesMap<F>, x: &SeriesMap<F>, d: usize) -> SeriesMap<F> {
    let left = matrix::matrix_product(m, x, d, d, d);
    matrix::matrix_product(&left, &matrix::transpose(m, d, d), d, d, d)
}

/// `r^g = (Ad e^χ ⊗ Ad e^χ)(r − η̄ + η̄^{21} − τ)`, known through the truncation of `r`
/// when `χ` is known one degree further.
pub fn gauge_transform<F: Scalar>(alg: &LieAlgebra<F>, r: &SeriesMap<F>, g: &GaugeElement<F>) -> SeriesMap<F> {
    let d = alg.dim();
    assert_eq!(r.target_dim(), d * d, "r must take values in g⊗g");
    if g.is_identity() {
        return r.truncated(g.trunc().saturating_sub(1));
    }
    let l = alg.l_indices();
    let eta_bar = g.eta.associated_function(d, |i| l[i]);
    let flipped = eta_bar.map_coeffs(d * d, |v| {
        let mut out = vec![F::zero(); d * d];
        kernels::flip2(v, &mut out, d);
        out
    });
    let x = r.sub(&eta_bar).add(&flipped).sub(&tau_of(alg, &g.eta));
    conjugate_series(&g.ad_exp, &x, d)
}

/// A constant automorphism `A_0` of `g` that fixes `l` pointwise and preserves `Ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantTwist<F: Scalar> {
    matrix: Matrix<F>,
}

impl<F: Scalar> ConstantTwist<F> {
    pub fn new(alg: &LieAlgebra<F>, casimir: &Casimir<F>, matrix: Matrix<F>) -> Result<Self, GaugeError> {
        let d = alg.dim();
        if matrix.rows() != d || matrix.cols() != d {
            return Err(GaugeError::InvalidTwist(format!("expected a {d}×{d} matrix")));
        }
        if matrix.inverse().is_none() {
            return Err(GaugeError::InvalidTwist("matrix is singular".into()));
        }
        for i in 0..d {
            for j in 0..d {
                let lhs = matrix.apply(&alg.bracket(&alg.basis_vector(i), &alg.basis_vector(j)));
                let rhs = alg.bracket(&matrix.column(i), &matrix.column(j));
                if lhs != rhs {
                    return Err(GaugeError::InvalidTwist(format!(
                        "not a homomorphism on [{}, {}]",
                        alg.labels()[i],
                        alg.labels()[j]
                    )));
                }
            }
        }
        for &y in alg.l_indices() {
            if matrix.column(y) != alg.basis_vector(y) {
                return Err(GaugeError::InvalidTwist(format!("moves {} in l", alg.labels()[y])));
            }
        }
        let omega = casimir.omega().to_matrix();
        if matrix.mul(&omega).mul(&matrix.transpose()) != omega {
            return Err(GaugeError::InvalidTwist("does not preserve Omega".into()));
        }
        Ok(ConstantTwist { matrix })
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    /// `(A_0⊗A_0) r`
    pub fn apply(&self, r: &SeriesMap<F>) -> SeriesMap<F> {
        let d = self.matrix.rows();
        r.map_coeffs(d * d, |v| {
            let mut out = vec![F::zero(); d * d];
            kernels::conjugate2(self.matrix.data(), v, &mut out, d);
            out
        })
    }

    /// `A_0^{⊗3}` on a three-leg series.
    pub fn apply3(&self, x: &SeriesMap<F>) -> SeriesMap<F> {
        let d = self.matrix.rows();
        let m = &self.matrix;
        x.map_coeffs(d * d * d, |v| {
            let t = crate::tensor::Tensor3::from_data(d, v.to_vec());
            let mut out = vec![F::zero(); d * d * d];
            for a in 0..d {
                for b in 0..d {
                    for c in 0..d {
                        let x = t.get(a, b, c);
                        if x.is_zero() {
                            continue;
                        }
                        for p in 0..d {
                            let xp = m[(p, a)].mul_ref(x);
                            if xp.is_zero() {
                                continue;
                            }
                            for q in 0..d {
                                let xpq = m[(q, b)].mul_ref(&xp);
                                if xpq.is_zero() {
                                    continue;
                                }
                                for s in 0..d {
                                    out[(p * d + q) * d + s].add_mul_assign(&m[(s, c)], &xpq);
                                }
                            }
                        }
                    }
                }
            }
            out
        })
    }
}

/// `(r^{g1})^{g2} = r^{g2 g1}`: the generator of `e^{χ2} e^{χ1}`.
pub fn compose<F: Scalar>(alg: &LieAlgebra<F>, g1: &GaugeElement<F>, g2: &GaugeElement<F>) -> GaugeElement<F> {
    if g1.is_identity() && g1.trunc() >= g2.trunc() {
        return g2.clone();
    }
    if g2.is_identity() && g2.trunc() >= g1.trunc() {
        return g1.clone();
    }
    GaugeElement::unchecked(alg, bch(alg, &g2.chi, &g1.chi))
}

/// Base-point normalization: a linear gauge moving `r(0)` into
/// `Ω/2 + Λ²m`. With `A = r(0) − Ω/2` the choice is `η̄_0 = ½A_ll + A_lm`,
/// which is `l`-invariant whenever `A` is, and `χ(λ) = ⟨λ ⊗ 1, η̄_0⟩`.
pub fn normalize_base_point<F: Scalar>(
    alg: &LieAlgebra<F>,
    casimir: &Casimir<F>,
    r: &SeriesMap<F>,
) -> Result<(GaugeElement<F>, SeriesMap<F>), GaugeError> {
    let d = alg.dim();
    let a = Tensor2::from_data(d, r.constant_term()).sub(&casimir.half());
    if !a.is_antisymmetric() {
        return Err(GaugeError::Shape("r(0) − Ω/2 is not antisymmetric".into()));
    }
    let half = F::from_ratio(1, 2);
    let mut chi = SeriesMap::zeros(alg.num_vars(), r.trunc() + 1, d);
    for (p, &i) in alg.l_indices().iter().enumerate() {
        let row: Vec<F> =
            (0..d).map(|j| if alg.in_l(j) { a.get(i, j).mul_ref(&half) } else { a.get(i, j).clone() }).collect();
        chi.add_term(crate::series::Monomial::var(alg.num_vars(), p), &row);
    }
    let g = GaugeElement::new(alg, chi)?;
    let rg = gauge_transform(alg, r, &g);
    let base = Tensor2::from_data(d, rg.constant_term()).sub(&casimir.half());
    if !base.in_lambda2_m(alg) {
        return Err(GaugeError::BlockForm("normalized base point is not in Ω/2 + Λ²m".into()));
    }
    Ok((g, rg))
}

#[cfg(test)]
mod tests;

