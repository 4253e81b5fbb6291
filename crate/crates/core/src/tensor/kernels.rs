//! Slice-level tensor kernels. Every `*_into` function accumulates into `out`.

use crate::lie::LieAlgebra;
use crate::scalar::Scalar;

/// Placement of a two-leg tensor inside three legs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Legs {
    L12,
    L13,
    L23,
}

impl Legs {
    pub fn positions(self) -> (usize, usize) {
        match self {
            Legs::L12 => (0, 1),
            Legs::L13 => (0, 2),
            Legs::L23 => (1, 2),
        }
    }
}

impl std::str::FromStr for Legs {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "12" => Ok(Legs::L12),
            "13" => Ok(Legs::L13),
            "23" => Ok(Legs::L23),
            other => Err(format!("invalid leg pair {other:?}")),
        }
    }
}

pub fn add<F: Scalar>(a: &[F], b: &[F]) -> Vec<F> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn sub<F: Scalar>(a: &[F], b: &[F]) -> Vec<F> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn add_assign<F: Scalar>(out: &mut [F], a: &[F]) {
    for (o, x) in out.iter_mut().zip(a) {
        if !x.is_zero() {
            *o += x;
        }
    }
}

pub fn sub_assign<F: Scalar>(out: &mut [F], a: &[F]) {
    for (o, x) in out.iter_mut().zip(a) {
        if !x.is_zero() {
            *o -= x;
        }
    }
}

/// `out += x^{21}`
pub fn flip2<F: Scalar>(x: &[F], out: &mut [F], d: usize) {
    for a in 0..d {
        for b in 0..d {
            let v = &x[a * d + b];
            if !v.is_zero() {
                out[b * d + a] += v;
            }
        }
    }
}

fn nonzeros<F: Scalar>(x: &[F]) -> impl Iterator<Item = (usize, &F)> {
    x.iter().enumerate().filter(|(_, v)| !v.is_zero())
}

/// `out += coeff · x` with legs rearranged: output leg `i` carries input leg `perm[i]`.
pub fn permute3<F: Scalar>(x: &[F], out: &mut [F], d: usize, perm: [usize; 3], coeff: &F) {
    for (flat, v) in nonzeros(x) {
        let j = [flat / (d * d), (flat / d) % d, flat % d];
        let o = (j[perm[0]] * d + j[perm[1]]) * d + j[perm[2]];
        out[o].add_mul_assign(coeff, v);
    }
}

/// `out += Alt(x) = x − x^{213} + x^{312}`, where for `x = a⊗b⊗c`,
/// `x^{213} = b⊗a⊗c` and `x^{312} = b⊗c⊗a`.
pub fn alt_into<F: Scalar>(x: &[F], out: &mut [F], d: usize) {
    let one = F::one();
    let minus = -F::one();
    permute3(x, out, d, [0, 1, 2], &one);
    permute3(x, out, d, [1, 0, 2], &minus);
    permute3(x, out, d, [1, 2, 0], &one);
}

/// `out += (1/6) Σ_σ sign(σ) x^σ`
pub fn antisymmetrize_into<F: Scalar>(x: &[F], out: &mut [F], d: usize) {
    let sixth = F::from_ratio(1, 6);
    let neg = -sixth.clone();
    for (perm, c) in [
        ([0, 1, 2], &sixth),
        ([1, 2, 0], &sixth),
        ([2, 0, 1], &sixth),
        ([1, 0, 2], &neg),
        ([0, 2, 1], &neg),
        ([2, 1, 0], &neg),
    ] {
        permute3(x, out, d, perm, c);
    }
}

/// `out += [a^{legs_a}, b^{legs_b}]`; legs sharing a position are bracketed,
/// the others placed as given. Equal leg pairs contribute the commutator in
/// both shared positions and are not used by the engine.
pub fn bracket_legs_into<F: Scalar>(
    alg: &LieAlgebra<F>,
    a: &[F],
    legs_a: Legs,
    b: &[F],
    legs_b: Legs,
    out: &mut [F],
) {
    assert_ne!(legs_a, legs_b, "bracket_legs needs distinct leg pairs");
    let d = alg.dim();
    let (p1, p2) = legs_a.positions();
    let (q1, q2) = legs_b.positions();
    let shared = if p1 == q1 || p1 == q2 { p1 } else { p2 };
    let other_a = if shared == p1 { p2 } else { p1 };
    let other_b = if shared == q1 { q2 } else { q1 };
    let b_nz: Vec<(usize, &F)> = nonzeros(b).collect();
    for (fa, va) in nonzeros(a) {
        let ia = [fa / d, fa % d];
        let (u, ua) = if shared == p1 { (ia[0], ia[1]) } else { (ia[1], ia[0]) };
        for &(fb, vb) in &b_nz {
            let ib = [fb / d, fb % d];
            let (v, vb_other) = if shared == q1 { (ib[0], ib[1]) } else { (ib[1], ib[0]) };
            let terms = alg.bracket_terms(u, v);
            if terms.is_empty() {
                continue;
            }
            let c = va.mul_ref(vb);
            let mut idx = [0usize; 3];
            idx[other_a] = ua;
            idx[other_b] = vb_other;
            for (w, s) in terms {
                idx[shared] = *w;
                out[(idx[0] * d + idx[1]) * d + idx[2]].add_mul_assign(&c, s);
            }
        }
    }
}

/// `out += [a^{12}, b^{13}] + [a^{12}, b^{23}] + [a^{13}, b^{23}]`, the bilinear
/// form whose diagonal is `CYB`.
pub fn cyb_bilinear_into<F: Scalar>(alg: &LieAlgebra<F>, a: &[F], b: &[F], out: &mut [F]) {
    bracket_legs_into(alg, a, Legs::L12, b, Legs::L13, out);
    bracket_legs_into(alg, a, Legs::L12, b, Legs::L23, out);
    bracket_legs_into(alg, a, Legs::L13, b, Legs::L23, out);
}

/// `out += [y⊗1 + 1⊗y, t]`
pub fn adjoint_action2<F: Scalar>(alg: &LieAlgebra<F>, y: &[F], t: &[F], out: &mut [F]) {
    let d = alg.dim();
    let m = alg.ad_matrix(y);
    for (flat, v) in nonzeros(t) {
        let (a, b) = (flat / d, flat % d);
        for k in 0..d {
            out[k * d + b].add_mul_assign(&m[(k, a)], v);
            out[a * d + k].add_mul_assign(&m[(k, b)], v);
        }
    }
}

/// `out += [y⊗1⊗1 + 1⊗y⊗1 + 1⊗1⊗y, t]`
pub fn adjoint_action3<F: Scalar>(alg: &LieAlgebra<F>, y: &[F], t: &[F], out: &mut [F]) {
    let d = alg.dim();
    let m = alg.ad_matrix(y);
    for (flat, v) in nonzeros(t) {
        let (a, b, c) = (flat / (d * d), (flat / d) % d, flat % d);
        for k in 0..d {
            out[(k * d + b) * d + c].add_mul_assign(&m[(k, a)], v);
            out[(a * d + k) * d + c].add_mul_assign(&m[(k, b)], v);
            out[(a * d + b) * d + k].add_mul_assign(&m[(k, c)], v);
        }
    }
}

/// `out += (M ⊗ M) t` for a `d×d` matrix given row-major.
pub fn conjugate2<F: Scalar>(m: &[F], t: &[F], out: &mut [F], d: usize) {
    let mut half = vec![F::zero(); d * d];
    for (flat, v) in nonzeros(t) {
        let (a, b) = (flat / d, flat % d);
        for k in 0..d {
            half[k * d + b].add_mul_assign(&m[k * d + a], v);
        }
    }
    for (flat, v) in nonzeros(&half) {
        let (k, b) = (flat / d, flat % d);
        for l in 0..d {
            out[k * d + l].add_mul_assign(&m[l * d + b], v);
        }
    }
}
