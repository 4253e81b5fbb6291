use crate::linalg::{span_basis, Matrix};
use crate::scalar::Scalar;
use crate::tensor::Tensor2;

use super::{LieAlgebra, LieError};

/// The invariant symmetric element `Ω ∈ S²g`, optionally with the form it
/// was derived from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Casimir<F: Scalar> {
    omega: Tensor2<F>,
    form: Option<Matrix<F>>,
}

impl<F: Scalar> Casimir<F> {
    pub fn new(omega: Tensor2<F>) -> Self {
        Casimir { omega, form: None }
    }

    /// `Ω = ( , )^{-1}` for a symmetric nondegenerate form.
    pub fn from_form(form: Matrix<F>) -> Result<Self, LieError> {
        let n = form.rows();
        if form.cols() != n {
            return Err(LieError::Shape("form must be square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if form[(i, j)] != form[(j, i)] {
                    return Err(LieError::AsymmetricForm(i, j));
                }
            }
        }
        let inv = form.inverse().ok_or(LieError::SingularForm)?;
        Ok(Casimir { omega: Tensor2::from_matrix(&inv), form: Some(form) })
    }

    pub fn omega(&self) -> &Tensor2<F> {
        &self.omega
    }

    pub fn form(&self) -> Option<&Matrix<F>> {
        self.form.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.omega.dim()
    }

    /// `Ω/2`
    pub fn half(&self) -> Tensor2<F> {
        self.omega.scale(&F::from_ratio(1, 2))
    }

    /// The `l⊗l` block `Ω_l`.
    pub fn omega_l(&self, alg: &LieAlgebra<F>) -> Tensor2<F> {
        self.omega.block(alg, true, true)
    }

    /// The `m⊗m` block `Ω_m`.
    pub fn omega_m(&self, alg: &LieAlgebra<F>) -> Tensor2<F> {
        self.omega.block(alg, false, false)
    }

    /// `Ω_l` as a `dim l × dim l` matrix indexed by coordinate variables.
    pub fn omega_l_matrix(&self, alg: &LieAlgebra<F>) -> Matrix<F> {
        let l = alg.l_indices();
        let mut m = Matrix::zeros(l.len(), l.len());
        for (p, &a) in l.iter().enumerate() {
            for (q, &b) in l.iter().enumerate() {
                m[(p, q)] = self.omega.get(a, b).clone();
            }
        }
        m
    }
}

/// The ideal `g_Ω` spanned by the components of `Ω`, with the coordinates
/// needed to identify it with its dual through `Ω`.
#[derive(Debug, Clone)]
pub struct OmegaIdeal<F: Scalar> {
    basis: Vec<Vec<F>>,
    basis_matrix: Matrix<F>,
    /// `Ω = Σ w_{kl} v_k ⊗ v_l`
    gram: Matrix<F>,
}

impl<F: Scalar> OmegaIdeal<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    /// `w` with `Ω = Σ w_{kl} v_k ⊗ v_l`; invertible, its inverse is the form on `g_Ω`.
    pub fn gram(&self) -> &Matrix<F> {
        &self.gram
    }

    /// Coordinates of `v ∈ g_Ω` in the ideal's basis.
    pub fn coordinates(&self, v: &[F]) -> Option<Vec<F>> {
        self.basis_matrix.solve(v)
    }

    pub fn include(&self, coords: &[F]) -> Vec<F> {
        self.basis_matrix.apply(coords)
    }

    /// `π*`: restriction of a covector on `g` to `g_Ω`, as values on the basis.
    pub fn restrict_covector(&self, phi: &[F]) -> Vec<F> {
        self.basis
            .iter()
            .map(|v| v.iter().zip(phi).fold(F::zero(), |mut acc, (a, b)| {
                acc.add_mul_assign(a, b);
                acc
            }))
            .collect()
    }

    /// The element of `g_Ω` matching a covector on `g_Ω` under the Ω-identification,
    /// in ideal coordinates: `ψ ↦ (ψ ⊗ 1)Ω`.
    pub fn dual_to_ideal(&self, psi: &[F]) -> Vec<F> {
        self.gram.transpose().apply(psi)
    }
}

/// Computes `g_Ω = span{(φ⊗1)Ω}` and checks that it is an ideal on which
/// `Ω` is nondegenerate.
pub fn omega_ideal<F: Scalar>(alg: &LieAlgebra<F>, casimir: &Casimir<F>) -> Result<OmegaIdeal<F>, LieError> {
    let d = alg.dim();
    if casimir.dim() != d {
        return Err(LieError::Shape(format!("Omega has dimension {}, algebra {d}", casimir.dim())));
    }
    let rows: Vec<Vec<F>> = (0..d).map(|a| (0..d).map(|b| casimir.omega().get(a, b).clone()).collect()).collect();
    let basis = span_basis(&rows, d);
    let k = basis.len();
    let basis_matrix = Matrix::from_columns(&basis, d);
    for i in 0..d {
        for (n, v) in basis.iter().enumerate() {
            let b = alg.bracket(&alg.basis_vector(i), v);
            if basis_matrix.solve(&b).is_none() {
                return Err(LieError::NotAnIdeal(alg.labels()[i].clone(), format!("v{n}")));
            }
        }
    }
    // Ω lies in g_Ω ⊗ g_Ω; read off w by solving column by column.
    let mut half = Matrix::zeros(k, d);
    for b in 0..d {
        let col: Vec<F> = (0..d).map(|a| casimir.omega().get(a, b).clone()).collect();
        let c = basis_matrix
            .solve(&col)
            .ok_or_else(|| LieError::DegenerateOmega("Omega is not in g_Omega ⊗ g".into()))?;
        for (kk, ck) in c.into_iter().enumerate() {
            half[(kk, b)] = ck;
        }
    }
    let mut gram = Matrix::zeros(k, k);
    for kk in 0..k {
        let c = basis_matrix
            .solve(half.row(kk))
            .ok_or_else(|| LieError::DegenerateOmega("Omega is not in g_Omega ⊗ g_Omega".into()))?;
        for (ll, cl) in c.into_iter().enumerate() {
            gram[(kk, ll)] = cl;
        }
    }
    if gram.inverse().is_none() {
        return Err(LieError::DegenerateOmega("Omega is degenerate on g_Omega".into()));
    }
    Ok(OmegaIdeal { basis, basis_matrix, gram })
}
