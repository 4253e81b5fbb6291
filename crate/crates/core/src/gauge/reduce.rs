use crate::lie::{Casimir, LieAlgebra};
use crate::rmatrix::construct_am_subalgebra;
use crate::scalar::Scalar;
use crate::series::{euler_primitive, SeriesMap};
use crate::tensor::Tensor2;

use super::equivalize::lm_one_form;
use super::{compose, gauge_equivalize, gauge_transform, normalize_base_point, GaugeElement, GaugeError};

/// Output of [`reduce_block_form`]: `r^g = r^l_AM + Ω_m/2 + t` through
/// degree `K − 1`, with `t: D → Λ²m`.
#[derive(Debug, Clone)]
pub struct BlockReduction<F: Scalar> {
    pub gauge: GaugeElement<F>,
    pub reduced: SeriesMap<F>,
    pub t: SeriesMap<F>,
}

fn l_block<F: Scalar>(alg: &LieAlgebra<F>, r: &SeriesMap<F>) -> SeriesMap<F> {
    let d = alg.dim();
    let l = alg.l_indices();
    let n = l.len();
    r.map_coeffs(n * n, |v| {
        let mut out = Vec::with_capacity(n * n);
        for &a in l {
            for &b in l {
                out.push(v[a * d + b].clone());
            }
        }
        out
    })
}

fn embed_l_vector<F: Scalar>(alg: &LieAlgebra<F>, x: &SeriesMap<F>) -> SeriesMap<F> {
    let d = alg.dim();
    let l = alg.l_indices();
    x.map_coeffs(d, |v| {
        let mut out = vec![F::zero(); d];
        for (p, &a) in l.iter().enumerate() {
            out[a] = v[p].clone();
        }
        out
    })
}

/// Gauges a dynamical r-matrix into the block form `r^l_AM + Ω_m/2 + t`.
///
/// After normalizing the base point, the `l⊗m` part of each degree is
/// removed by `e^χ` with `dχ = ξ`, `ξ̄` that part. The remaining `l⊗l`
/// block is then a dynamical r-matrix for `(l, Ω_l)` with base point
/// `Ω_l/2` and is gauged onto `r^l_AM` inside `l`.
pub fn reduce_block_form<F: Scalar>(
    alg: &LieAlgebra<F>,
    casimir: &Casimir<F>,
    r: &SeriesMap<F>,
) -> Result<BlockReduction<F>, GaugeError> {
    let d = alg.dim();
    let trunc = r.trunc();
    let (mut g, mut rho) = normalize_base_point(alg, casimir, r)?;
    for i in 1..trunc {
        let xi = lm_one_form(alg, &rho.homogeneous(i).with_trunc(trunc));
        if xi.components().iter().all(|c| c.is_zero()) {
            continue;
        }
        let chi = euler_primitive(&xi)?;
        let h = GaugeElement::new(alg, chi)?;
        rho = gauge_transform(alg, &rho, &h);
        g = compose(alg, &g, &h);
    }
    let sub = alg.subalgebra_l()?;
    let am = construct_am_subalgebra(alg, casimir, trunc)?;
    let h_sub = gauge_equivalize(&sub, &l_block(alg, &rho), &l_block(alg, &am.r))?;
    let h = GaugeElement::new(alg, embed_l_vector(alg, h_sub.chi()))?;
    rho = gauge_transform(alg, &rho, &h);
    g = compose(alg, &g, &h);
    let reduced = rho.truncated(trunc.saturating_sub(1));
    let t = reduced.sub(&am.r);
    for (m, v) in t.terms() {
        if !Tensor2::from_data(d, v.clone()).in_lambda2_m(alg) {
            return Err(GaugeError::BlockForm(format!("t leaves Λ²m at {m}")));
        }
    }
    Ok(BlockReduction { gauge: g, reduced, t })
}
