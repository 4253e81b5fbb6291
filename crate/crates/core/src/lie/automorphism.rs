use crate::linalg::Matrix;
use crate::scalar::{Scalar, ScalarError};

use super::{Casimir, LieAlgebra, LieError};

/// A finite-order automorphism `B`; column `j` of the matrix is `B(e_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphism<F: Scalar> {
    matrix: Matrix<F>,
    order: u32,
}

impl<F: Scalar> Automorphism<F> {
    pub fn new(matrix: Matrix<F>, order: u32) -> Result<Self, LieError> {
        if matrix.rows() != matrix.cols() {
            return Err(LieError::InvalidAutomorphism("matrix is not square".into()));
        }
        if order == 0 {
            return Err(LieError::InvalidAutomorphism("order must be positive".into()));
        }
        Ok(Automorphism { matrix, order })
    }

    pub fn identity(dim: usize) -> Self {
        Automorphism { matrix: Matrix::identity(dim), order: 1 }
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        self.matrix.apply(v)
    }

    /// First basis pair `(i, j)` with `B[e_i, e_j] ≠ [B e_i, B e_j]`.
    pub fn homomorphism_defect(&self, alg: &LieAlgebra<F>) -> Option<(usize, usize)> {
        let d = alg.dim();
        for i in 0..d {
            for j in 0..d {
                let lhs = self.apply(&alg.bracket(&alg.basis_vector(i), &alg.basis_vector(j)));
                let rhs = alg.bracket(&self.matrix.column(i), &self.matrix.column(j));
                if lhs != rhs {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn has_order(&self) -> bool {
        self.matrix.pow(self.order) == Matrix::identity(self.matrix.rows())
    }

    /// `(Bx, By) = (x, y)` on basis pairs.
    pub fn preserves_form(&self, form: &Matrix<F>) -> bool {
        self.matrix.transpose().mul(form).mul(&self.matrix) == *form
    }

    pub fn check(&self, alg: &LieAlgebra<F>, casimir: Option<&Casimir<F>>) -> Result<(), LieError> {
        if self.matrix.rows() != alg.dim() {
            return Err(LieError::InvalidAutomorphism(format!(
                "matrix is {0}x{0}, algebra has dimension {1}",
                self.matrix.rows(),
                alg.dim()
            )));
        }
        if let Some((i, j)) = self.homomorphism_defect(alg) {
            return Err(LieError::InvalidAutomorphism(format!(
                "B does not preserve [{}, {}]",
                alg.labels()[i],
                alg.labels()[j]
            )));
        }
        if !self.has_order() {
            return Err(LieError::InvalidAutomorphism(format!("B^{} is not the identity", self.order)));
        }
        if let Some(form) = casimir.and_then(|c| c.form()) {
            if !self.preserves_form(form) {
                return Err(LieError::InvalidAutomorphism("B does not preserve the form".into()));
            }
        } else if let Some(c) = casimir {
            let omega = c.omega().to_matrix();
            if self.matrix.mul(&omega).mul(&self.matrix.transpose()) != omega {
                return Err(LieError::InvalidAutomorphism("B does not preserve Omega".into()));
            }
        }
        Ok(())
    }
}

/// Eigenspace decomposition `g = ⊕ g_j`, `g_j = ker(B − ζ_n^j)`.
#[derive(Debug, Clone)]
pub struct Grading<F> {
    order: u32,
    blocks: Vec<Vec<Vec<F>>>,
}

impl<F: Scalar> Grading<F> {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn block(&self, j: usize) -> &[Vec<F>] {
        &self.blocks[j]
    }

    pub fn blocks(&self) -> &[Vec<Vec<F>>] {
        &self.blocks
    }

    /// All eigenvectors, block by block, with their degree.
    pub fn flattened(&self) -> Vec<(u32, Vec<F>)> {
        self.blocks
            .iter()
            .enumerate()
            .flat_map(|(j, b)| b.iter().map(move |v| (j as u32, v.clone())))
            .collect()
    }

    /// Checks `[g_i, g_j] ⊆ g_{i+j}` on all eigenvector pairs.
    pub fn bracket_compatible(&self, alg: &LieAlgebra<F>, b: &Automorphism<F>) -> bool {
        let flat = self.flattened();
        let n = self.order;
        for (i, u) in &flat {
            for (j, v) in &flat {
                let w = alg.bracket(u, v);
                let Some(z) = F::root_of_unity(n, (i + j) % n) else {
                    return false;
                };
                let bw = b.apply(&w);
                if bw != w.iter().map(|x| x.mul_ref(&z)).collect::<Vec<_>>() {
                    return false;
                }
            }
        }
        true
    }
}

pub fn grading_from_automorphism<F: Scalar>(
    alg: &LieAlgebra<F>,
    b: &Automorphism<F>,
) -> Result<Grading<F>, LieError> {
    let n = b.order();
    let d = alg.dim();
    let mut blocks = Vec::with_capacity(n as usize);
    let mut found = 0;
    for j in 0..n {
        let z = F::root_of_unity(n, j).ok_or_else(|| {
            LieError::Scalar(ScalarError::MissingRootOfUnity { n, field: F::field_kind().to_string() })
        })?;
        let shifted = b.matrix().sub(&Matrix::identity(d).scale(&z));
        let kernel = shifted.nullspace();
        found += kernel.len();
        blocks.push(kernel);
    }
    if found != d {
        return Err(LieError::NotDiagonalizable { order: n, field: F::field_kind().to_string(), found, dim: d });
    }
    Ok(Grading { order: n, blocks })
}

/// The algebra restated in an eigenbasis of `B`, with `l = g_0`.
#[derive(Debug, Clone)]
pub struct TwistedSetup<F: Scalar> {
    pub algebra: LieAlgebra<F>,
    pub casimir: Casimir<F>,
    /// Degree `j` of each new basis vector.
    pub degrees: Vec<u32>,
    pub order: u32,
    /// Columns are the new basis vectors in the original coordinates.
    pub change_of_basis: Matrix<F>,
}

impl<F: Scalar> TwistedSetup<F> {
    pub fn new(alg: &LieAlgebra<F>, casimir: &Casimir<F>, b: &Automorphism<F>) -> Result<Self, LieError> {
        b.check(alg, Some(casimir))?;
        let grading = grading_from_automorphism(alg, b)?;
        let flat = grading.flattened();
        let degrees: Vec<u32> = flat.iter().map(|(j, _)| *j).collect();
        let columns: Vec<Vec<F>> = flat.into_iter().map(|(_, v)| v).collect();
        let mut counters = vec![0usize; grading.order() as usize];
        let labels = degrees
            .iter()
            .map(|&j| {
                let k = counters[j as usize];
                counters[j as usize] += 1;
                format!("g{j}.{k}")
            })
            .collect();
        let l: Vec<usize> = (0..degrees.len()).filter(|&i| degrees[i] == 0).collect();
        let (algebra, p) = alg.rebase(&columns, labels, l)?;
        let p_inv = p.inverse().expect("rebase checked invertibility");
        let omega = p_inv.mul(&casimir.omega().to_matrix()).mul(&p_inv.transpose());
        let new_casimir = match casimir.form() {
            Some(form) => Casimir::from_form(p.transpose().mul(form).mul(&p))?,
            None => Casimir::new(crate::tensor::Tensor2::from_matrix(&omega)),
        };
        debug_assert_eq!(new_casimir.omega().to_matrix(), omega);
        Ok(TwistedSetup { algebra, casimir: new_casimir, degrees, order: grading.order(), change_of_basis: p })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::library;
    use crate::scalar::{Cyclotomic, Rational};

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn identity_gives_single_block() {
        let (g, _) = library::sl2::<Rational>();
        let gr = grading_from_automorphism(&g, &Automorphism::identity(3)).unwrap();
        assert_eq!(gr.blocks().len(), 1);
        assert_eq!(gr.block(0).len(), 3);
    }

    #[test]
    fn inner_involution_of_sl2() {
        let (g, _) = library::sl2::<Rational>();
        let b = library::sl2_inner_involution::<Rational>();
        let gr = grading_from_automorphism(&g, &b).unwrap();
        assert_eq!(gr.block(0), &[vec![q(0), q(0), q(1)]]);
        assert_eq!(gr.block(1).len(), 2);
        for v in gr.block(1) {
            assert!(v[2].is_zero());
        }
        assert!(gr.bracket_compatible(&g, &b));
    }

    #[test]
    fn swap_on_sl2_sum() {
        let (g, _) = library::sl2_sum::<Rational>();
        let b = library::swap_automorphism::<Rational>(3);
        let gr = grading_from_automorphism(&g, &b).unwrap();
        for v in gr.block(0) {
            assert_eq!(&v[0..3], &v[3..6]);
        }
        for v in gr.block(1) {
            let neg: Vec<Rational> = v[3..6].iter().map(|x| -x.clone()).collect();
            assert_eq!(&v[0..3], neg.as_slice());
        }
        assert_eq!(gr.block(0).len(), 3);
        assert!(gr.bracket_compatible(&g, &b));
    }

    #[test]
    fn order_three_needs_cyclotomic_field() {
        let g = library::abelian::<Rational>(3);
        let b = library::cyclic_shift::<Rational>(1, 3);
        let err = grading_from_automorphism(&g, &b).unwrap_err();
        assert!(matches!(err, LieError::Scalar(ScalarError::MissingRootOfUnity { n: 3, .. })));
        let g3 = library::abelian::<Cyclotomic<3>>(3);
        let b3 = library::cyclic_shift::<Cyclotomic<3>>(1, 3);
        let gr = grading_from_automorphism(&g3, &b3).unwrap();
        assert!(gr.blocks().iter().all(|bl| bl.len() == 1));
        assert!(gr.bracket_compatible(&g3, &b3));
    }

    #[test]
    fn wrong_order_is_not_diagonalizable() {
        // a rotation of order 4 declared with order 2 has no eigenvectors for ±1
        let g = library::abelian::<Rational>(2);
        let m = Matrix::from_rows(vec![vec![q(0), q(-1)], vec![q(1), q(0)]]);
        let b = Automorphism::new(m, 2).unwrap();
        assert!(!b.has_order());
        assert!(matches!(grading_from_automorphism(&g, &b), Err(LieError::NotDiagonalizable { .. })));
    }

    #[test]
    fn non_homomorphism_is_rejected() {
        let (g, c) = library::sl2::<Rational>();
        let m = Matrix::from_rows(vec![vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)], vec![q(0), q(0), q(-1)]]);
        let b = Automorphism::new(m, 2).unwrap();
        assert!(b.homomorphism_defect(&g).is_some());
        assert!(b.check(&g, Some(&c)).is_err());
    }

    #[test]
    fn twisted_setup_rebases_casimir() {
        let (g, c) = library::sl2_sum::<Rational>();
        let b = library::swap_automorphism::<Rational>(3);
        let setup = TwistedSetup::new(&g, &c, &b).unwrap();
        assert_eq!(setup.algebra.l_indices(), &[0, 1, 2]);
        assert!(setup.casimir.omega().is_symmetric());
        assert!(setup.casimir.omega().is_block_diagonal(&setup.algebra));
    }
}
