//! Dense tensors on `g⊗g` and `g⊗g⊗g`.
//!
//! The slice kernels in [`kernels`] do the work; [`Tensor2`] and [`Tensor3`]
//! are thin owned wrappers. Series code calls the kernels directly on
//! coefficient vectors.

pub mod kernels;

use std::fmt;

use crate::lie::LieAlgebra;
use crate::linalg::Matrix;
use crate::scalar::Scalar;

pub use kernels::Legs;

/// Element of `g⊗g`, index `(a, b)` stored at `a * dim + b`.
#[derive(Clone, PartialEq, Eq)]
pub struct Tensor2<F> {
    dim: usize,
    data: Vec<F>,
}

/// Element of `g⊗g⊗g`, index `(a, b, c)` stored at `(a * dim + b) * dim + c`.
#[derive(Clone, PartialEq, Eq)]
pub struct Tensor3<F> {
    dim: usize,
    data: Vec<F>,
}

impl<F: Scalar> Tensor2<F> {
    pub fn zeros(dim: usize) -> Self {
        Tensor2 { dim, data: vec![F::zero(); dim * dim] }
    }

    pub fn from_data(dim: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), dim * dim);
        Tensor2 { dim, data }
    }

    pub fn from_entries(dim: usize, entries: impl IntoIterator<Item = (usize, usize, F)>) -> Self {
        let mut t = Self::zeros(dim);
        for (a, b, c) in entries {
            t.data[a * dim + b] += &c;
        }
        t
    }

    /// `x ⊗ y`
    pub fn outer(x: &[F], y: &[F]) -> Self {
        let dim = x.len();
        let mut t = Self::zeros(dim);
        for (a, xa) in x.iter().enumerate() {
            for (b, yb) in y.iter().enumerate() {
                t.data[a * dim + b] = xa.mul_ref(yb);
            }
        }
        t
    }

    /// `x ∧ y = x⊗y − y⊗x`
    pub fn wedge(x: &[F], y: &[F]) -> Self {
        Self::outer(x, y).sub(&Self::outer(y, x))
    }

    pub fn from_matrix(m: &Matrix<F>) -> Self {
        assert_eq!(m.rows(), m.cols());
        Tensor2 { dim: m.rows(), data: m.data().to_vec() }
    }

    pub fn to_matrix(&self) -> Matrix<F> {
        Matrix::from_flat(self.dim, self.dim, self.data.clone())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[F] {
        &self.data
    }

    pub fn into_data(self) -> Vec<F> {
        self.data
    }

    pub fn get(&self, a: usize, b: usize) -> &F {
        &self.data[a * self.dim + b]
    }

    pub fn set(&mut self, a: usize, b: usize, v: F) {
        self.data[a * self.dim + b] = v;
    }

    /// `x^{21}`
    pub fn flip(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        kernels::flip2(&self.data, &mut out.data, self.dim);
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        Tensor2 { dim: self.dim, data: kernels::add(&self.data, &other.data) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Tensor2 { dim: self.dim, data: kernels::sub(&self.data, &other.data) }
    }

    pub fn scale(&self, c: &F) -> Self {
        Tensor2 { dim: self.dim, data: self.data.iter().map(|x| x.mul_ref(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        self.flip() == *self
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.add(&self.flip()).is_zero()
    }

    /// Keeps the entries whose legs satisfy `(in_l(a), in_l(b)) == (first, second)`.
    pub fn block(&self, alg: &LieAlgebra<F>, first_in_l: bool, second_in_l: bool) -> Self {
        let mut out = Self::zeros(self.dim);
        for a in 0..self.dim {
            if alg.in_l(a) != first_in_l {
                continue;
            }
            for b in 0..self.dim {
                if alg.in_l(b) == second_in_l {
                    out.data[a * self.dim + b] = self.get(a, b).clone();
                }
            }
        }
        out
    }

    pub fn in_lambda2_l(&self, alg: &LieAlgebra<F>) -> bool {
        self.is_antisymmetric() && *self == self.block(alg, true, true)
    }

    pub fn in_lambda2_m(&self, alg: &LieAlgebra<F>) -> bool {
        self.is_antisymmetric() && *self == self.block(alg, false, false)
    }

    /// Lies in `l⊗l ⊕ m⊗m` (no mixed entries).
    pub fn is_block_diagonal(&self, alg: &LieAlgebra<F>) -> bool {
        self.block(alg, true, false).is_zero() && self.block(alg, false, true).is_zero()
    }

    /// `[y⊗1 + 1⊗y, self]`
    pub fn adjoint_action(&self, alg: &LieAlgebra<F>, y: &[F]) -> Self {
        let mut out = Self::zeros(self.dim);
        kernels::adjoint_action2(alg, y, &self.data, &mut out.data);
        out
    }

    /// `(φ ⊗ 1) self`, contracting the first leg against a covector.
    pub fn contract_first(&self, phi: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.dim];
        for (a, pa) in phi.iter().enumerate() {
            if pa.is_zero() {
                continue;
            }
            for (b, o) in out.iter_mut().enumerate() {
                o.add_mul_assign(pa, self.get(a, b));
            }
        }
        out
    }
}

impl<F: Scalar> Tensor3<F> {
    pub fn zeros(dim: usize) -> Self {
        Tensor3 { dim, data: vec![F::zero(); dim * dim * dim] }
    }

    pub fn from_data(dim: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), dim * dim * dim);
        Tensor3 { dim, data }
    }

    pub fn outer(x: &[F], y: &[F], z: &[F]) -> Self {
        let dim = x.len();
        let mut t = Self::zeros(dim);
        for (a, xa) in x.iter().enumerate() {
            for (b, yb) in y.iter().enumerate() {
                let xy = xa.mul_ref(yb);
                for (c, zc) in z.iter().enumerate() {
                    t.data[(a * dim + b) * dim + c] = xy.mul_ref(zc);
                }
            }
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[F] {
        &self.data
    }

    pub fn into_data(self) -> Vec<F> {
        self.data
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> &F {
        &self.data[(a * self.dim + b) * self.dim + c]
    }

    pub fn add(&self, other: &Self) -> Self {
        Tensor3 { dim: self.dim, data: kernels::add(&self.data, &other.data) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Tensor3 { dim: self.dim, data: kernels::sub(&self.data, &other.data) }
    }

    pub fn scale(&self, c: &F) -> Self {
        Tensor3 { dim: self.dim, data: self.data.iter().map(|x| x.mul_ref(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// The tensor with legs rearranged so that leg `i` of the output carries
    /// leg `perm[i]` of the input.
    pub fn permute(&self, perm: [usize; 3]) -> Self {
        let mut out = Self::zeros(self.dim);
        kernels::permute3(&self.data, &mut out.data, self.dim, perm, &F::one());
        out
    }

    pub fn alt(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        kernels::alt_into(&self.data, &mut out.data, self.dim);
        out
    }

    pub fn is_fully_antisymmetric(&self) -> bool {
        let neg = self.scale(&-F::one());
        self.permute([1, 0, 2]) == neg && self.permute([0, 2, 1]) == neg
    }

    /// `[y⊗1⊗1 + 1⊗y⊗1 + 1⊗1⊗y, self]`
    pub fn adjoint_action(&self, alg: &LieAlgebra<F>, y: &[F]) -> Self {
        let mut out = Self::zeros(self.dim);
        kernels::adjoint_action3(alg, y, &self.data, &mut out.data);
        out
    }

    /// `(φ ⊗ 1 ⊗ 1) self`
    pub fn contract_first(&self, phi: &[F]) -> Tensor2<F> {
        let d2 = self.dim * self.dim;
        let mut out: Tensor2<F> = Tensor2::zeros(self.dim);
        for (a, pa) in phi.iter().enumerate() {
            if pa.is_zero() {
                continue;
            }
            for (o, x) in out.data.iter_mut().zip(&self.data[a * d2..(a + 1) * d2]) {
                o.add_mul_assign(pa, x);
            }
        }
        out
    }

    /// Lies in `Alt(l⊗g⊗g)`: after full antisymmetrization every nonzero
    /// component has a leg in `l`.
    pub fn in_alt_l_g_g(&self, alg: &LieAlgebra<F>) -> bool {
        project_lambda3_quotient(alg, self).1
    }
}

/// A two-leg tensor placed inside three legs, the free leg carrying `1`.
#[derive(Debug, Clone, Copy)]
pub struct Embedded<'a, F: Scalar> {
    pub tensor: &'a Tensor2<F>,
    pub legs: Legs,
}

/// `a^{legs}`
pub fn leg_embed<F: Scalar>(a: &Tensor2<F>, legs: Legs) -> Embedded<'_, F> {
    Embedded { tensor: a, legs }
}

impl<F: Scalar> Embedded<'_, F> {
    /// Nonzero terms as three slots, `None` standing for the unit.
    pub fn terms(&self) -> Vec<([Option<usize>; 3], F)> {
        let d = self.tensor.dim;
        let (p, q) = self.legs.positions();
        self.tensor
            .data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(flat, v)| {
                let mut slots = [None; 3];
                slots[p] = Some(flat / d);
                slots[q] = Some(flat % d);
                (slots, v.clone())
            })
            .collect()
    }

    pub fn bracket(&self, alg: &LieAlgebra<F>, other: &Embedded<'_, F>) -> Tensor3<F> {
        bracket_legs(alg, self.tensor, self.legs, other.tensor, other.legs)
    }
}

/// `[a^{legs_a}, b^{legs_b}]`
pub fn bracket_legs<F: Scalar>(
    alg: &LieAlgebra<F>,
    a: &Tensor2<F>,
    legs_a: Legs,
    b: &Tensor2<F>,
    legs_b: Legs,
) -> Tensor3<F> {
    let mut out = Tensor3::zeros(alg.dim());
    kernels::bracket_legs_into(alg, &a.data, legs_a, &b.data, legs_b, &mut out.data);
    out
}

/// `CYB(r) = [r^{12}, r^{13}] + [r^{12}, r^{23}] + [r^{13}, r^{23}]`
pub fn cyb<F: Scalar>(alg: &LieAlgebra<F>, r: &Tensor2<F>) -> Tensor3<F> {
    let mut out = Tensor3::zeros(alg.dim());
    kernels::cyb_bilinear_into(alg, &r.data, &r.data, &mut out.data);
    out
}

/// The polarization `CYB(a + b) − CYB(a) − CYB(b)`, six bracket terms.
pub fn cyb_polarized<F: Scalar>(alg: &LieAlgebra<F>, a: &Tensor2<F>, b: &Tensor2<F>) -> Tensor3<F> {
    let mut out = Tensor3::zeros(alg.dim());
    kernels::cyb_bilinear_into(alg, &a.data, &b.data, &mut out.data);
    kernels::cyb_bilinear_into(alg, &b.data, &a.data, &mut out.data);
    out
}

/// Image of `x` in `Λ³(g/l)`: the full antisymmetrization of `x` with every
/// component touching `l` removed. The flag is true when nothing remains.
pub fn project_lambda3_quotient<F: Scalar>(alg: &LieAlgebra<F>, x: &Tensor3<F>) -> (Tensor3<F>, bool) {
    let d = alg.dim();
    let mut full = Tensor3::zeros(d);
    kernels::antisymmetrize_into(&x.data, &mut full.data, d);
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                if alg.in_l(a) || alg.in_l(b) || alg.in_l(c) {
                    full.data[(a * d + b) * d + c] = F::zero();
                }
            }
        }
    }
    let zero = full.is_zero();
    (full, zero)
}

impl<F: Scalar> fmt::Debug for Tensor2<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> = (0..self.dim * self.dim)
            .filter(|&i| !self.data[i].is_zero())
            .map(|i| format!("({},{}): {}", i / self.dim, i % self.dim, self.data[i]))
            .collect();
        write!(f, "Tensor2[{}]", entries.join(", "))
    }
}

impl<F: Scalar> fmt::Debug for Tensor3<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.dim;
        let entries: Vec<String> = (0..d * d * d)
            .filter(|&i| !self.data[i].is_zero())
            .map(|i| format!("({},{},{}): {}", i / (d * d), (i / d) % d, i % d, self.data[i]))
            .collect();
        write!(f, "Tensor3[{}]", entries.join(", "))
    }
}
