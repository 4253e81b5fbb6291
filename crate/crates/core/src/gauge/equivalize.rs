use crate::lie::LieAlgebra;
use crate::rmatrix::{alt_series, d_bar};
use crate::scalar::Scalar;
use crate::series::{euler_primitive, euler_primitive_two_form, OneFormSeries, SeriesMap, TwoFormSeries};

use super::{compose, gauge_transform, GaugeElement, GaugeError};

/// `ξ` with `ξ̄` the `l⊗m` block of `e`: `ξ_a = e[l_a][·]` on `m`.
pub(super) fn lm_one_form<F: Scalar>(alg: &LieAlgebra<F>, e: &SeriesMap<F>) -> OneFormSeries<F> {
    let d = alg.dim();
    let comps = alg
        .l_indices()
        .iter()
        .map(|&a| {
            e.map_coeffs(d, |v| (0..d).map(|b| if alg.in_l(b) { F::zero() } else { v[a * d + b].clone() }).collect())
        })
        .collect();
    OneFormSeries::new(comps)
}

/// `χ` of degree `k + 1` with `ζ̄ − ζ̄^{21} = E_k` for `ζ = dχ`.
///
/// `ζ = ξ + dη̄`: `ξ̄` is the `l⊗m` block and `dη = ω` for the two-form
/// `ω_ab = E_k[l_a][l_b]`.
fn step_generator<F: Scalar>(alg: &LieAlgebra<F>, e_k: &SeriesMap<F>, k: usize) -> Result<SeriesMap<F>, GaugeError> {
    let d = alg.dim();
    let l = alg.l_indices();
    if !alt_series(d, &d_bar(alg, e_k)).is_zero() {
        return Err(GaugeError::AltNonzero { degree: k });
    }
    let mm_nonzero = e_k.terms().any(|(_, v)| {
        alg.m_indices().iter().any(|&a| alg.m_indices().iter().any(|&b| !v[a * d + b].is_zero()))
    });
    if mm_nonzero {
        return Err(GaugeError::MmComponent { degree: k });
    }
    let chi_xi = euler_primitive(&lm_one_form(alg, e_k))?;
    let omega = TwoFormSeries::from_upper(alg.num_vars(), |a, b| e_k.map_coeffs(1, |v| vec![v[l[a] * d + l[b]].clone()]));
    let eta = euler_primitive_two_form(&omega)?;
    let mut chi = chi_xi;
    for (a, comp) in eta.components().iter().enumerate() {
        let la = l[a];
        chi = chi.add(&comp.map_coeffs(d, |v| {
            let mut out = vec![F::zero(); d];
            out[la] = v[0].clone();
            out
        }));
    }
    Ok(chi)
}

/// A gauge `g` with `r^g ≡ ρ` through degree `K − 1`, `K` the smaller
/// truncation, for dynamical r-matrices with `r(0) = ρ(0)`.
///
/// Degree by degree the lowest defect `E_k = r^g − ρ` is written as
/// `ζ̄ − ζ̄^{21}` for a closed one-form `ζ = dχ`, and `e^χ` is applied after `g`.
pub fn gauge_equivalize<F: Scalar>(
    alg: &LieAlgebra<F>,
    r: &SeriesMap<F>,
    rho: &SeriesMap<F>,
) -> Result<GaugeElement<F>, GaugeError> {
    r.check_compatible(rho).map_err(|e| GaugeError::Shape(e.to_string()))?;
    let trunc = r.trunc().min(rho.trunc());
    let r = r.truncated(trunc);
    let rho = rho.truncated(trunc);
    if r.constant_term() != rho.constant_term() {
        return Err(GaugeError::BasePointMismatch);
    }
    let mut g = GaugeElement::identity(alg, trunc + 1);
    if trunc == 0 {
        return Ok(g);
    }
    for k in 1..trunc {
        let diff = gauge_transform(alg, &r, &g).sub(&rho);
        match diff.valuation() {
            Some(v) if v < k => return Err(GaugeError::NotEquivalent { degree: v }),
            Some(v) if v == k => {}
            _ => continue,
        }
        let e_k = diff.homogeneous(k).with_trunc(trunc);
        let chi = step_generator(alg, &e_k, k)?;
        let h = GaugeElement::new(alg, chi)?;
        g = compose(alg, &g, &h);
    }
    let diff = gauge_transform(alg, &r, &g).sub(&rho).truncated(trunc - 1);
    if let Some(v) = diff.valuation() {
        return Err(GaugeError::NotEquivalent { degree: v });
    }
    Ok(g)
}
