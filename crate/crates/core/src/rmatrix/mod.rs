//! Dynamical r-matrices `r: D → g⊗g` and their three defining conditions:
//! quasi-unitarity `r + r^{21} = Ω`, `l`-equivariance and the classical
//! dynamical Yang-Baxter equation `Alt(d̄r) + CYB(r) = 0`.

mod am;
mod twisted;

use serde::Serialize;
use thiserror::Error;

use crate::lie::{LieAlgebra, LieError};
use crate::scalar::{Scalar, ScalarError};
use crate::series::{equivariance_defect, OneFormSeries, SeriesMap};
use crate::tensor::{kernels, Tensor2};

pub use am::{construct_am, construct_am_subalgebra, SubalgebraAm};
pub use twisted::{construct_twisted, cyclic_oracle, TwistedRMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RMatrixError {
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("constructed rho is not antisymmetric in degree {0}")]
    NotAntisymmetric(usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

/// A series into `g⊗g` together with the `Ω` it is normalized against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicalRMatrix<F: Scalar> {
    r: SeriesMap<F>,
    omega: Tensor2<F>,
}

impl<F: Scalar> DynamicalRMatrix<F> {
    pub fn new(r: SeriesMap<F>, omega: Tensor2<F>) -> Self {
        assert_eq!(r.target_dim(), omega.dim() * omega.dim(), "r must take values in g⊗g");
        DynamicalRMatrix { r, omega }
    }

    pub fn series(&self) -> &SeriesMap<F> {
        &self.r
    }

    pub fn into_series(self) -> SeriesMap<F> {
        self.r
    }

    pub fn omega(&self) -> &Tensor2<F> {
        &self.omega
    }

    pub fn trunc(&self) -> usize {
        self.r.trunc()
    }

    pub fn verify(&self, alg: &LieAlgebra<F>) -> VerifyReport {
        verify(alg, &self.omega, &self.r)
    }
}

/// `d̄r = Σ_i e_{l_i} ⊗ ∂_i r`, the `l`-leg first.
pub fn d_bar<F: Scalar>(alg: &LieAlgebra<F>, r: &SeriesMap<F>) -> SeriesMap<F> {
    let d = alg.dim();
    let inner = r.target_dim();
    if alg.num_vars() == 0 {
        return SeriesMap::zeros(0, r.trunc().saturating_sub(1), d * inner);
    }
    let l = alg.l_indices();
    OneFormSeries::differential(r).associated_function(d, |i| l[i])
}

/// `CYB(r)` coefficientwise through the truncation of `r`.
pub fn cyb_series<F: Scalar>(alg: &LieAlgebra<F>, r: &SeriesMap<F>) -> SeriesMap<F> {
    let d = alg.dim();
    r.bilinear(r, d * d * d, |a, b, out| kernels::cyb_bilinear_into(alg, a, b, out))
}

/// `Alt(x)` coefficientwise.
pub fn alt_series<F: Scalar>(d: usize, x: &SeriesMap<F>) -> SeriesMap<F> {
    x.map_coeffs(d * d * d, |v| {
        let mut out = vec![F::zero(); v.len()];
        kernels::alt_into(v, &mut out, d);
        out
    })
}

/// `Alt(d̄r) + CYB(r)`, known through degree `K − 1`.
///
/// # Panics
/// If `r` is only known in degree 0.
pub fn cdybe_residual<F: Scalar>(alg: &LieAlgebra<F>, r: &SeriesMap<F>) -> SeriesMap<F> {
    let d = alg.dim();
    assert_eq!(r.target_dim(), d * d, "r must take values in g⊗g");
    assert!(r.trunc() >= 1, "the residual needs r through degree at least 1");
    let alt = alt_series(d, &d_bar(alg, r));
    let low = r.truncated(r.trunc() - 1);
    alt.add(&cyb_series(alg, &low))
}

/// `r + r^{21} − Ω`
pub fn quasi_unitarity_defect<F: Scalar>(r: &SeriesMap<F>, omega: &Tensor2<F>) -> SeriesMap<F> {
    let d = omega.dim();
    let sym = r.map_coeffs(d * d, |v| {
        let mut out = v.to_vec();
        kernels::flip2(v, &mut out, d);
        out
    });
    sym.sub(&SeriesMap::constant(r.num_vars(), r.trunc(), omega.data().to_vec()))
}

/// The lowest nonzero coefficient entry of a residual.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub degree: usize,
    pub monomial: String,
    /// Tensor position, one basis index per leg.
    pub index: Vec<usize>,
    pub labels: Vec<String>,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidualCheck {
    pub name: String,
    pub passed: bool,
    /// Degree through which the residual is known.
    pub through_degree: usize,
    pub first_failure: Option<Failure>,
    pub nonzeros_by_degree: Vec<usize>,
}

impl ResidualCheck {
    pub fn from_residual<F: Scalar>(name: &str, alg: &LieAlgebra<F>, legs: usize, residual: &SeriesMap<F>) -> Self {
        Self::from_residuals(name, alg, legs, std::slice::from_ref(residual))
    }

    /// Combines several residuals (one per basis vector of `l`, say); the
    /// reported failure is the one of lowest degree.
    pub fn from_residuals<F: Scalar>(name: &str, alg: &LieAlgebra<F>, legs: usize, residuals: &[SeriesMap<F>]) -> Self {
        let through = residuals.iter().map(|r| r.trunc()).min().unwrap_or(0);
        let mut counts = vec![0; through + 1];
        let mut first: Option<Failure> = None;
        for r in residuals {
            for (deg, n) in r.nonzeros_by_degree().into_iter().enumerate().take(through + 1) {
                counts[deg] += n;
            }
            if let Some((m, v)) = r.first_nonzero() {
                if first.as_ref().is_none_or(|f| m.degree() < f.degree) {
                    first = Some(failure_entry(alg, legs, m, v));
                }
            }
        }
        ResidualCheck {
            name: name.to_string(),
            passed: first.is_none(),
            through_degree: through,
            first_failure: first,
            nonzeros_by_degree: counts,
        }
    }
}

fn failure_entry<F: Scalar>(alg: &LieAlgebra<F>, legs: usize, m: &crate::series::Monomial, v: &[F]) -> Failure {
    let d = alg.dim();
    let (flat, x) = v.iter().enumerate().find(|(_, x)| !x.is_zero()).expect("nonzero coefficient");
    let mut index = vec![0; legs];
    let mut rest = flat;
    for slot in index.iter_mut().rev() {
        *slot = rest % d;
        rest /= d;
    }
    Failure {
        degree: m.degree(),
        monomial: m.to_string(),
        labels: index.iter().map(|&i| alg.labels()[i].clone()).collect(),
        index,
        value: x.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub quasi_unitarity: ResidualCheck,
    pub equivariance: ResidualCheck,
    pub cdybe: ResidualCheck,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.quasi_unitarity.passed && self.equivariance.passed && self.cdybe.passed
    }

    pub fn checks(&self) -> [&ResidualCheck; 3] {
        [&self.quasi_unitarity, &self.equivariance, &self.cdybe]
    }
}

/// Quasi-unitarity, equivariance (for every basis vector of `l`) and CDYBE.
pub fn verify<F: Scalar>(alg: &LieAlgebra<F>, omega: &Tensor2<F>, r: &SeriesMap<F>) -> VerifyReport {
    let qu = quasi_unitarity_defect(r, omega);
    let eq: Vec<SeriesMap<F>> = alg.l_indices().iter().map(|&y| equivariance_defect(alg, r, 2, y)).collect();
    let eq_check = if eq.is_empty() {
        ResidualCheck::from_residual("equivariance", alg, 2, &SeriesMap::zeros(r.num_vars(), r.trunc(), r.target_dim()))
    } else {
        ResidualCheck::from_residuals("equivariance", alg, 2, &eq)
    };
    VerifyReport {
        quasi_unitarity: ResidualCheck::from_residual("quasi_unitarity", alg, 2, &qu),
        equivariance: eq_check,
        cdybe: ResidualCheck::from_residual("cdybe", alg, 3, &cdybe_residual(alg, r)),
    }
}
