//! Lie algebras given by structure constants, together with the split
//! `g = l ⊕ m` that every dynamical construction is relative to.
//!
//! Basis vectors keep the order in which they were declared. The subalgebra
//! `l` is an ordered subset of basis indices, and its position in that subset
//! is the index of the matching coordinate variable on the formal disc.

mod automorphism;
mod casimir;
pub mod library;
mod validate;

use std::fmt;

use thiserror::Error;

use crate::linalg::Matrix;
use crate::scalar::{Scalar, ScalarError};

pub use automorphism::{grading_from_automorphism, Automorphism, Grading, TwistedSetup};
pub use casimir::{omega_ideal, Casimir, OmegaIdeal};
pub use validate::{validate, CheckResult, ValidationReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("subalgebra index {0} listed twice")]
    DuplicateIndex(usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("bilinear form is singular")]
    SingularForm,
    #[error("bilinear form is not symmetric at ({0}, {1})")]
    AsymmetricForm(usize, usize),
    #[error("automorphism of order {order} is not diagonalizable over {field}: eigenspaces span {found} of {dim} dimensions")]
    NotDiagonalizable { order: u32, field: String, found: usize, dim: usize },
    #[error("Omega cannot identify g_Omega with its dual: {0}")]
    DegenerateOmega(String),
    #[error("g_Omega is not an ideal: [{0}, {1}] leaves the span")]
    NotAnIdeal(String, String),
    #[error("l is not closed: [{0}, {1}] leaves l")]
    NotClosed(String, String),
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A finite-dimensional Lie algebra with a distinguished subalgebra `l` and
/// complement `m` (the remaining basis vectors).
#[derive(Clone, PartialEq, Eq)]
pub struct LieAlgebra<F> {
    labels: Vec<String>,
    /// Sparse `[e_i, e_j]` stored at `i * dim + j`.
    brackets: Vec<Vec<(usize, F)>>,
    l_indices: Vec<usize>,
    m_indices: Vec<usize>,
    variable_of: Vec<Option<usize>>,
}

/// One declared bracket `[e_i, e_j] = sum_k c_k e_k`.
pub type BracketEntry<F> = (usize, usize, Vec<(usize, F)>);

impl<F: Scalar> LieAlgebra<F> {
    /// Builds the algebra from the nonzero brackets `[e_i, e_j]`. A pair given
    /// only once is completed antisymmetrically; pairs given twice are kept
    /// verbatim so that [`validate`] can report inconsistencies.
    pub fn new(
        labels: Vec<String>,
        entries: Vec<BracketEntry<F>>,
        l_indices: Vec<usize>,
    ) -> Result<Self, LieError> {
        let dim = labels.len();
        let mut brackets: Vec<Vec<(usize, F)>> = vec![Vec::new(); dim * dim];
        let mut given = vec![false; dim * dim];
        for (i, j, terms) in entries {
            for &idx in [i, j].iter().chain(terms.iter().map(|(k, _)| k)) {
                if idx >= dim {
                    return Err(LieError::IndexOutOfRange { index: idx, dim });
                }
            }
            let mut dense = vec![F::zero(); dim];
            for (k, c) in terms {
                dense[k] += &c;
            }
            brackets[i * dim + j] = sparse(&dense);
            given[i * dim + j] = true;
        }
        for i in 0..dim {
            for j in 0..dim {
                if given[i * dim + j] && !given[j * dim + i] && i != j {
                    brackets[j * dim + i] =
                        brackets[i * dim + j].iter().map(|(k, c)| (*k, -c.clone())).collect();
                    given[j * dim + i] = true;
                }
            }
        }
        let mut alg = LieAlgebra {
            labels,
            brackets,
            l_indices: Vec::new(),
            m_indices: Vec::new(),
            variable_of: vec![None; dim],
        };
        alg.set_split(l_indices)?;
        Ok(alg)
    }

    fn set_split(&mut self, l_indices: Vec<usize>) -> Result<(), LieError> {
        let dim = self.dim();
        let mut variable_of = vec![None; dim];
        for (pos, &i) in l_indices.iter().enumerate() {
            if i >= dim {
                return Err(LieError::IndexOutOfRange { index: i, dim });
            }
            if variable_of[i].is_some() {
                return Err(LieError::DuplicateIndex(i));
            }
            variable_of[i] = Some(pos);
        }
        self.m_indices = (0..dim).filter(|&i| variable_of[i].is_none()).collect();
        self.l_indices = l_indices;
        self.variable_of = variable_of;
        Ok(())
    }

    /// Same brackets, different subalgebra.
    pub fn with_subalgebra(&self, l_indices: Vec<usize>) -> Result<Self, LieError> {
        let mut alg = self.clone();
        alg.set_split(l_indices)?;
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn l_indices(&self) -> &[usize] {
        &self.l_indices
    }

    pub fn m_indices(&self) -> &[usize] {
        &self.m_indices
    }

    /// Number of coordinate variables on the formal disc, `dim l`.
    pub fn num_vars(&self) -> usize {
        self.l_indices.len()
    }

    pub fn in_l(&self, i: usize) -> bool {
        self.variable_of[i].is_some()
    }

    /// Coordinate variable attached to basis vector `i`, if `e_i` is in `l`.
    pub fn variable_of(&self, i: usize) -> Option<usize> {
        self.variable_of[i]
    }

    /// `[e_i, e_j]` as sparse `(k, c_ij^k)` pairs.
    pub fn bracket_terms(&self, i: usize, j: usize) -> &[(usize, F)] {
        &self.brackets[i * self.dim() + j]
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> F {
        self.bracket_terms(i, j)
            .iter()
            .find(|(kk, _)| *kk == k)
            .map_or_else(F::zero, |(_, c)| c.clone())
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.iter().all(|b| b.is_empty())
    }

    /// `[x, y]` for coordinate vectors.
    pub fn bracket(&self, x: &[F], y: &[F]) -> Vec<F> {
        let d = self.dim();
        let mut out = vec![F::zero(); d];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi.mul_ref(yj);
                for (k, s) in self.bracket_terms(i, j) {
                    out[*k].add_mul_assign(&c, s);
                }
            }
        }
        out
    }

    /// Matrix of `ad x`: column `j` holds `[x, e_j]`.
    pub fn ad_matrix(&self, x: &[F]) -> Matrix<F> {
        let d = self.dim();
        let mut m: Matrix<F> = Matrix::zeros(d, d);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..d {
                for (k, c) in self.bracket_terms(i, j) {
                    m[(*k, j)].add_mul_assign(xi, c);
                }
            }
        }
        m
    }

    pub fn basis_vector(&self, i: usize) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim()];
        v[i] = F::one();
        v
    }

    /// The projection `pi: g -> l` along `m`, written as coordinates on `l`
    /// (one entry per variable).
    pub fn project_to_l(&self, v: &[F]) -> Vec<F> {
        self.l_indices.iter().map(|&i| v[i].clone()).collect()
    }

    /// Re-expresses the algebra in a new basis. `columns[k]` is the `k`-th new
    /// basis vector in old coordinates; `l_indices` refers to the new basis.
    pub fn rebase(
        &self,
        columns: &[Vec<F>],
        labels: Vec<String>,
        l_indices: Vec<usize>,
    ) -> Result<(Self, Matrix<F>), LieError> {
        let d = self.dim();
        if columns.len() != d || labels.len() != d {
            return Err(LieError::Shape(format!("rebase needs {d} basis vectors")));
        }
        let p = Matrix::from_columns(columns, d);
        let p_inv = p
            .inverse()
            .ok_or_else(|| LieError::Shape("new basis vectors are linearly dependent".into()))?;
        let mut entries = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let b = p_inv.apply(&self.bracket(&columns[i], &columns[j]));
                let terms: Vec<(usize, F)> = sparse(&b);
                if !terms.is_empty() {
                    entries.push((i, j, terms));
                }
            }
        }
        Ok((LieAlgebra::new(labels, entries, l_indices)?, p))
    }

    /// `l` as an algebra of its own (basis `e_{l_p}` in variable order, with
    /// `l` equal to everything).
    pub fn subalgebra_l(&self) -> Result<Self, LieError> {
        let l = &self.l_indices;
        let mut entries = Vec::new();
        for (p, &a) in l.iter().enumerate() {
            for (q, &b) in l.iter().enumerate() {
                let mut terms = Vec::new();
                for (k, c) in self.bracket_terms(a, b) {
                    match self.variable_of[*k] {
                        Some(v) => terms.push((v, c.clone())),
                        None => return Err(LieError::NotClosed(self.labels[a].clone(), self.labels[b].clone())),
                    }
                }
                if !terms.is_empty() {
                    entries.push((p, q, terms));
                }
            }
        }
        let labels = l.iter().map(|&a| self.labels[a].clone()).collect();
        LieAlgebra::new(labels, entries, (0..l.len()).collect())
    }

    /// Direct sum `self ⊕ other`; the subalgebra is the union of both.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let d1 = self.dim();
        let d2 = other.dim();
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        let mut brackets = vec![Vec::new(); (d1 + d2) * (d1 + d2)];
        for i in 0..d1 {
            for j in 0..d1 {
                brackets[i * (d1 + d2) + j] = self.bracket_terms(i, j).to_vec();
            }
        }
        for i in 0..d2 {
            for j in 0..d2 {
                brackets[(d1 + i) * (d1 + d2) + d1 + j] =
                    other.bracket_terms(i, j).iter().map(|(k, c)| (k + d1, c.clone())).collect();
            }
        }
        let mut l = self.l_indices.clone();
        l.extend(other.l_indices.iter().map(|i| i + d1));
        let mut alg =
            LieAlgebra { labels, brackets, l_indices: Vec::new(), m_indices: Vec::new(), variable_of: vec![None; d1 + d2] };
        alg.set_split(l).expect("disjoint index sets");
        alg
    }
}

pub(crate) fn sparse<F: Scalar>(v: &[F]) -> Vec<(usize, F)> {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k, c.clone())).collect()
}

impl<F: Scalar> fmt::Debug for LieAlgebra<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LieAlgebra")
            .field("labels", &self.labels)
            .field("l_indices", &self.l_indices)
            .finish()
    }
}
