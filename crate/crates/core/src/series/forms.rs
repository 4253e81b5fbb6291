use thiserror::Error;

use crate::scalar::Scalar;

use super::SeriesMap;

/// A closedness check that failed: `∂_j ω_i ≠ ∂_i ω_j` (or the cyclic sum
/// for two-forms), first seen in degree `degree`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("form is not closed: components ({i}, {j}) disagree in degree {degree}")]
pub struct ClosednessError {
    pub i: usize,
    pub j: usize,
    pub degree: usize,
}

/// `Σ_i ω_i dx_i` with `V`-valued components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneFormSeries<F: Scalar> {
    components: Vec<SeriesMap<F>>,
}

impl<F: Scalar> OneFormSeries<F> {
    pub fn new(components: Vec<SeriesMap<F>>) -> Self {
        if let Some(first) = components.first() {
            assert_eq!(components.len(), first.num_vars(), "one component per variable");
            for c in &components {
                first.check_compatible(c).expect("one-form component shapes");
            }
        }
        OneFormSeries { components }
    }

    /// `dχ`
    pub fn differential(chi: &SeriesMap<F>) -> Self {
        OneFormSeries { components: (0..chi.num_vars()).map(|i| chi.partial(i)).collect() }
    }

    pub fn components(&self) -> &[SeriesMap<F>] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &SeriesMap<F> {
        &self.components[i]
    }

    pub fn num_vars(&self) -> usize {
        self.components.len()
    }

    pub fn trunc(&self) -> usize {
        self.components.iter().map(|c| c.trunc()).min().unwrap_or(0)
    }

    /// `ω̄ = Σ_i e_{l_i} ⊗ ω_i`, placing the form index as a leading leg of
    /// size `outer_dim` at slot `leg_index(i)`.
    pub fn associated_function(&self, outer_dim: usize, leg_index: impl Fn(usize) -> usize) -> SeriesMap<F> {
        let inner = self.components[0].target_dim();
        let mut out = SeriesMap::zeros(self.num_vars(), self.trunc(), outer_dim * inner);
        for (i, c) in self.components.iter().enumerate() {
            let slot = leg_index(i);
            for (m, v) in c.terms() {
                let mut w = vec![F::zero(); outer_dim * inner];
                w[slot * inner..(slot + 1) * inner].clone_from_slice(v);
                out.add_term(m.clone(), &w);
            }
        }
        out
    }

    /// `i_E ω = Σ_i x_i ω_i`
    pub fn contract_euler(&self) -> SeriesMap<F> {
        let mut out = SeriesMap::zeros(self.num_vars(), self.trunc() + 1, self.components[0].target_dim());
        for (i, c) in self.components.iter().enumerate() {
            out = out.add(&c.mul_coord(i));
        }
        out
    }

    pub fn check_closed(&self) -> Result<(), ClosednessError> {
        let r = self.num_vars();
        let mut worst: Option<ClosednessError> = None;
        for i in 0..r {
            for j in (i + 1)..r {
                let diff = self.components[i].partial(j).sub(&self.components[j].partial(i));
                if let Some(d) = diff.valuation() {
                    if worst.as_ref().is_none_or(|w| d < w.degree) {
                        worst = Some(ClosednessError { i, j, degree: d });
                    }
                }
            }
        }
        worst.map_or(Ok(()), Err)
    }
}

/// Primitive `χ` with `dχ = ω` and `χ(0) = 0`, through the Euler homotopy:
/// the degree-`d` part of `χ` is `(1/d) Σ_i x_i [ω_i]_{d−1}`. Closedness is
/// checked on the output and a failing pair is reported.
pub fn euler_primitive<F: Scalar>(omega: &OneFormSeries<F>) -> Result<SeriesMap<F>, ClosednessError> {
    let r = omega.num_vars();
    let k = omega.trunc();
    let dim = omega.components[0].target_dim();
    let mut chi = SeriesMap::zeros(r, k + 1, dim);
    for i in 0..r {
        for (m, v) in omega.components[i].terms() {
            if m.degree() > k {
                continue;
            }
            let d = m.degree() + 1;
            let c = F::from_ratio(1, d as i64);
            let w: Vec<F> = v.iter().map(|x| x.mul_ref(&c)).collect();
            chi.add_term(m.mul_var(i), &w);
        }
    }
    for i in 0..r {
        if chi.partial(i) != omega.components[i].truncated(k) {
            return Err(omega.check_closed().err().unwrap_or(ClosednessError { i, j: i, degree: 0 }));
        }
    }
    Ok(chi)
}

/// `Σ_{i<j} ω_{ij} dx_i ∧ dx_j`, stored for all ordered pairs with `ω_{ji} = −ω_{ij}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoFormSeries<F: Scalar> {
    num_vars: usize,
    components: Vec<SeriesMap<F>>,
}

impl<F: Scalar> TwoFormSeries<F> {
    /// From the upper-triangular components `ω_{ij}`, `i < j`, supplied by `f`.
    pub fn from_upper(num_vars: usize, mut f: impl FnMut(usize, usize) -> SeriesMap<F>) -> Self {
        let mut components: Vec<Option<SeriesMap<F>>> = vec![None; num_vars * num_vars];
        let mut template = None;
        for i in 0..num_vars {
            for j in (i + 1)..num_vars {
                let c = f(i, j);
                components[j * num_vars + i] = Some(c.neg());
                if template.is_none() {
                    template = Some(c.scale(&F::zero()));
                }
                components[i * num_vars + j] = Some(c);
            }
        }
        let zero = template.unwrap_or_else(|| f(0, 0).scale(&F::zero()));
        let components = components.into_iter().map(|c| c.unwrap_or_else(|| zero.clone())).collect();
        TwoFormSeries { num_vars, components }
    }

    pub fn component(&self, i: usize, j: usize) -> &SeriesMap<F> {
        &self.components[i * self.num_vars + j]
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn trunc(&self) -> usize {
        self.components.iter().map(|c| c.trunc()).min().unwrap_or(0)
    }

    /// `dη` of a one-form: `(dη)_{ij} = ∂_i η_j − ∂_j η_i`.
    pub fn differential(eta: &OneFormSeries<F>) -> Self {
        let r = eta.num_vars();
        Self::from_upper(r, |i, j| {
            if i == j {
                eta.component(0).partial(0).scale(&F::zero())
            } else {
                eta.component(j).partial(i).sub(&eta.component(i).partial(j))
            }
        })
    }

    /// `dω = 0`: the cyclic sums `∂_i ω_{jk} + ∂_j ω_{ki} + ∂_k ω_{ij}` vanish.
    pub fn check_closed(&self) -> Result<(), ClosednessError> {
        let r = self.num_vars;
        for i in 0..r {
            for j in (i + 1)..r {
                for k in (j + 1)..r {
                    let s = self
                        .component(j, k)
                        .partial(i)
                        .add(&self.component(k, i).partial(j))
                        .add(&self.component(i, j).partial(k));
                    if let Some(d) = s.valuation() {
                        return Err(ClosednessError { i, j, degree: d });
                    }
                }
            }
        }
        Ok(())
    }
}

/// One-form `η` with `dη = ω` for a closed two-form: for `ω` homogeneous of
/// degree `p`, `η_j = (1/(p+2)) Σ_i x_i ω_{ij}`.
pub fn euler_primitive_two_form<F: Scalar>(omega: &TwoFormSeries<F>) -> Result<OneFormSeries<F>, ClosednessError> {
    let r = omega.num_vars();
    let k = omega.trunc();
    let dim = omega.component(0, 0).target_dim();
    let mut comps = vec![SeriesMap::zeros(r, k + 1, dim); r];
    for (j, comp) in comps.iter_mut().enumerate() {
        for i in 0..r {
            if i == j {
                continue;
            }
            for (m, v) in omega.component(i, j).terms() {
                let c = F::from_ratio(1, (m.degree() + 2) as i64);
                let w: Vec<F> = v.iter().map(|x| x.mul_ref(&c)).collect();
                comp.add_term(m.mul_var(i), &w);
            }
        }
    }
    let eta = OneFormSeries::new(comps);
    let back = TwoFormSeries::differential(&eta);
    for i in 0..r {
        for j in (i + 1)..r {
            if back.component(i, j) != &omega.component(i, j).truncated(k) {
                return Err(omega.check_closed().err().unwrap_or(ClosednessError { i, j, degree: 0 }));
            }
        }
    }
    Ok(eta)
}
