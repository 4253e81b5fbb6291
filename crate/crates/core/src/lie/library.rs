//! Small algebras used by the tests, the acceptance suite and the bundled fixtures.

use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::tensor::Tensor2;

use super::{Automorphism, Casimir, LieAlgebra};

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn int<F: Scalar>(n: i64) -> F {
    F::from_int(n)
}

/// `sl2` in the basis `(e, f, h)` with `l = g` and the trace form.
pub fn sl2<F: Scalar>() -> (LieAlgebra<F>, Casimir<F>) {
    let g = LieAlgebra::new(
        labels(&["e", "f", "h"]),
        vec![
            (0, 1, vec![(2, int(1))]),
            (2, 0, vec![(0, int(2))]),
            (2, 1, vec![(1, int(-2))]),
        ],
        vec![0, 1, 2],
    )
    .expect("sl2 structure constants");
    (g, Casimir::from_form(trace_form_sl2()).expect("trace form"))
}

fn trace_form_sl2<F: Scalar>() -> Matrix<F> {
    Matrix::from_rows(vec![
        vec![int(0), int(1), int(0)],
        vec![int(1), int(0), int(0)],
        vec![int(0), int(0), int(2)],
    ])
}

/// `sl2` with `l` the Cartan line spanned by `h`.
pub fn sl2_cartan<F: Scalar>() -> (LieAlgebra<F>, Casimir<F>) {
    let (g, c) = sl2();
    (g.with_subalgebra(vec![2]).expect("h is a basis vector"), c)
}

/// `gl2` in the basis `(E11, E12, E21, E22)` with `l = g` and the trace form.
pub fn gl2<F: Scalar>() -> (LieAlgebra<F>, Casimir<F>) {
    // E_ij ↔ index 2i + j
    let idx = |i: usize, j: usize| 2 * i + j;
    let mut entries = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    // [E_ij, E_kl] = δ_jk E_il − δ_li E_kj
                    let mut terms = Vec::new();
                    if j == k {
                        terms.push((idx(i, l), int(1)));
                    }
                    if l == i {
                        terms.push((idx(k, j), int(-1)));
                    }
                    entries.push((idx(i, j), idx(k, l), terms));
                }
            }
        }
    }
    let g = LieAlgebra::new(labels(&["E11", "E12", "E21", "E22"]), entries, vec![0, 1, 2, 3])
        .expect("gl2 structure constants");
    let mut form = Matrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            form[(idx(i, j), idx(j, i))] = F::one();
        }
    }
    (g, Casimir::from_form(form).expect("trace form"))
}

/// `sl2 ⊕ ℂz` with `Ω` the `sl2` Casimir, so that `g_Ω = sl2`.
pub fn sl2_plus_center<F: Scalar>() -> (LieAlgebra<F>, Casimir<F>) {
    let (s, c) = sl2::<F>();
    let g = s.direct_sum(&abelian_named(&["z"]));
    let mut omega = Tensor2::zeros(4);
    for a in 0..3 {
        for b in 0..3 {
            omega.set(a, b, c.omega().get(a, b).clone());
        }
    }
    (g, Casimir::new(omega))
}

/// `n` copies of `h` with the block-diagonal form; `l` is the union of the copies' subalgebras.
pub fn copies<F: Scalar>(h: &LieAlgebra<F>, casimir: &Casimir<F>, n: usize) -> (LieAlgebra<F>, Casimir<F>) {
    let d = h.dim();
    let mut g = h.clone();
    for _ in 1..n {
        g = g.direct_sum(h);
    }
    let relabeled: Vec<String> = (0..n)
        .flat_map(|c| h.labels().iter().map(move |l| if n > 1 { format!("{l}{}", c + 1) } else { l.clone() }))
        .collect();
    let g = LieAlgebra { labels: relabeled, ..g };
    let block = match casimir.form() {
        Some(f) => f.clone(),
        None => casimir.omega().to_matrix().inverse().expect("copies need a nondegenerate Omega"),
    };
    let mut form = Matrix::zeros(n * d, n * d);
    for c in 0..n {
        for a in 0..d {
            for b in 0..d {
                form[(c * d + a, c * d + b)] = block[(a, b)].clone();
            }
        }
    }
    (g, Casimir::from_form(form).expect("block form"))
}

/// `sl2 ⊕ sl2` with `l = g` (use [`LieAlgebra::with_subalgebra`] or a
/// [`super::TwistedSetup`] for other splits).
pub fn sl2_sum<F: Scalar>() -> (LieAlgebra<F>, Casimir<F>) {
    let (s, c) = sl2();
    copies(&s, &c, 2)
}

/// Abelian algebra of dimension `n`, `l = g`.
pub fn abelian<F: Scalar>(n: usize) -> LieAlgebra<F> {
    let names: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
    LieAlgebra::new(names, vec![], (0..n).collect()).expect("abelian")
}

fn abelian_named<F: Scalar>(names: &[&str]) -> LieAlgebra<F> {
    LieAlgebra::new(labels(names), vec![], (0..names.len()).collect()).expect("abelian")
}

/// The two-dimensional algebra `[x, y] = y` with `l = ℂy`.
pub fn xu<F: Scalar>() -> LieAlgebra<F> {
    LieAlgebra::new(labels(&["x", "y"]), vec![(0, 1, vec![(1, int(1))])], vec![1]).expect("xu algebra")
}

/// `Ad diag(1, −1)` on `sl2`: `e ↦ −e`, `f ↦ −f`, `h ↦ h`.
pub fn sl2_inner_involution<F: Scalar>() -> Automorphism<F> {
    let m = Matrix::from_rows(vec![
        vec![int(-1), int(0), int(0)],
        vec![int(0), int(-1), int(0)],
        vec![int(0), int(0), int(1)],
    ]);
    Automorphism::new(m, 2).expect("square")
}

/// Cyclic shift of `copies` blocks of size `block`: copy `c` goes to copy `c + 1`.
pub fn cyclic_shift<F: Scalar>(block: usize, copies: usize) -> Automorphism<F> {
    let d = block * copies;
    let mut m = Matrix::zeros(d, d);
    for c in 0..copies {
        for a in 0..block {
            m[(((c + 1) % copies) * block + a, c * block + a)] = F::one();
        }
    }
    Automorphism::new(m, copies as u32).expect("square")
}

/// Factor swap on two copies of a `block`-dimensional algebra.
pub fn swap_automorphism<F: Scalar>(block: usize) -> Automorphism<F> {
    cyclic_shift(block, 2)
}
