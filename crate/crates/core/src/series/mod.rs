//! Truncated formal power series `D → V` in the coordinates `x_1..x_r` of
//! the formal disc, with coefficients in a finite-dimensional space `V`.
//!
//! A series records the degree `trunc` through which its coefficients are
//! known. Derivatives lower it by one, multiplication by a coordinate raises
//! it by one, and binary operations take the minimum.

mod equivariance;
mod forms;
pub mod matrix;
mod monomial;

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::scalar::Scalar;

pub use equivariance::{
    equivariance_defect, equivariant_homogeneous, homogeneous_kernel, is_equivariant, pairing_series,
};
pub use forms::{euler_primitive, euler_primitive_two_form, ClosednessError, OneFormSeries, TwoFormSeries};
pub use monomial::Monomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("shape mismatch: {0}")]
    Shape(String),
}

#[derive(Clone, PartialEq, Eq)]
pub struct SeriesMap<F> {
    num_vars: usize,
    trunc: usize,
    target_dim: usize,
    coeffs: BTreeMap<Monomial, Vec<F>>,
}

impl<F: Scalar> SeriesMap<F> {
    pub fn zeros(num_vars: usize, trunc: usize, target_dim: usize) -> Self {
        SeriesMap { num_vars, trunc, target_dim, coeffs: BTreeMap::new() }
    }

    pub fn constant(num_vars: usize, trunc: usize, value: Vec<F>) -> Self {
        let mut s = Self::zeros(num_vars, trunc, value.len());
        s.add_term(Monomial::one(num_vars), &value);
        s
    }

    /// `x_i · value`
    pub fn coordinate_times(num_vars: usize, trunc: usize, i: usize, value: Vec<F>) -> Self {
        let mut s = Self::zeros(num_vars, trunc, value.len());
        s.add_term(Monomial::var(num_vars, i), &value);
        s
    }

    pub fn from_terms(
        num_vars: usize,
        trunc: usize,
        target_dim: usize,
        terms: impl IntoIterator<Item = (Monomial, Vec<F>)>,
    ) -> Self {
        let mut s = Self::zeros(num_vars, trunc, target_dim);
        for (m, v) in terms {
            s.add_term(m, &v);
        }
        s
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Vec<F>)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&[F]> {
        self.coeffs.get(m).map(|v| v.as_slice())
    }

    pub fn coeff_or_zero(&self, m: &Monomial) -> Vec<F> {
        self.coeff(m).map_or_else(|| vec![F::zero(); self.target_dim], |v| v.to_vec())
    }

    /// Value at `λ = 0`.
    pub fn constant_term(&self) -> Vec<F> {
        self.coeff_or_zero(&Monomial::one(self.num_vars))
    }

    /// Adds `v · λ^m`; terms above the truncation degree are dropped.
    pub fn add_term(&mut self, m: Monomial, v: &[F]) {
        assert_eq!(m.num_vars(), self.num_vars, "monomial arity");
        assert_eq!(v.len(), self.target_dim, "coefficient length");
        if m.degree() > self.trunc || v.iter().all(|x| x.is_zero()) {
            return;
        }
        let entry = self.coeffs.entry(m.clone()).or_insert_with(|| vec![F::zero(); v.len()]);
        for (e, x) in entry.iter_mut().zip(v) {
            *e += x;
        }
        if entry.iter().all(|x| x.is_zero()) {
            self.coeffs.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest-order nonzero coefficient.
    pub fn first_nonzero(&self) -> Option<(&Monomial, &Vec<F>)> {
        self.coeffs.iter().next()
    }

    /// Lowest degree carrying a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.first_nonzero().map(|(m, _)| m.degree())
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.coeffs.keys().next_back().map(|m| m.degree())
    }

    /// Number of nonzero coefficient entries in each degree `0..=trunc`.
    pub fn nonzeros_by_degree(&self) -> Vec<usize> {
        let mut out = vec![0; self.trunc + 1];
        for (m, v) in &self.coeffs {
            out[m.degree()] += v.iter().filter(|x| !x.is_zero()).count();
        }
        out
    }

    /// The homogeneous component of degree `d`.
    pub fn homogeneous(&self, d: usize) -> Self {
        let coeffs = self.coeffs.iter().filter(|(m, _)| m.degree() == d).map(|(m, v)| (m.clone(), v.clone())).collect();
        SeriesMap { coeffs, ..self.shell() }
    }

    /// Drops everything above degree `k` and lowers the truncation bound to `k`.
    pub fn truncated(&self, k: usize) -> Self {
        let k = k.min(self.trunc);
        let coeffs = self.coeffs.iter().filter(|(m, _)| m.degree() <= k).map(|(m, v)| (m.clone(), v.clone())).collect();
        SeriesMap { coeffs, trunc: k, ..self.shell() }
    }

    /// Same coefficients, declared valid through `k` (for values known exactly,
    /// such as polynomials).
    pub fn with_trunc(mut self, k: usize) -> Self {
        self.trunc = k;
        self.coeffs.retain(|m, _| m.degree() <= k);
        self
    }

    fn shell(&self) -> Self {
        SeriesMap { num_vars: self.num_vars, trunc: self.trunc, target_dim: self.target_dim, coeffs: BTreeMap::new() }
    }

    pub fn check_compatible(&self, other: &Self) -> Result<(), SeriesError> {
        if self.num_vars != other.num_vars {
            return Err(SeriesError::Shape(format!("{} vs {} variables", self.num_vars, other.num_vars)));
        }
        if self.target_dim != other.target_dim {
            return Err(SeriesError::Shape(format!("target dimension {} vs {}", self.target_dim, other.target_dim)));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_compatible(other)?;
        Ok(self.add(other))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        self.check_compatible(other).expect("series shapes");
        let trunc = self.trunc.min(other.trunc);
        let mut out = SeriesMap { trunc, ..self.shell() };
        for (m, v) in &self.coeffs {
            out.add_term(m.clone(), v);
        }
        for (m, v) in &other.coeffs {
            if negate {
                let neg: Vec<F> = v.iter().map(|x| -x.clone()).collect();
                out.add_term(m.clone(), &neg);
            } else {
                out.add_term(m.clone(), v);
            }
        }
        out
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map_coeffs(self.target_dim, |v| v.iter().map(|x| x.mul_ref(c)).collect())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-F::one())
    }

    /// Applies a linear map coefficientwise.
    pub fn map_coeffs(&self, new_dim: usize, f: impl Fn(&[F]) -> Vec<F> + Sync) -> Self {
        let mut out = SeriesMap { target_dim: new_dim, ..self.shell() };
        for (m, v) in &self.coeffs {
            let w = f(v);
            assert_eq!(w.len(), new_dim);
            out.add_term(m.clone(), &w);
        }
        out
    }

    /// `f(a, b)` for a bilinear `f` on coefficients, truncated at the smaller
    /// bound. `f` accumulates into its output slice. Output monomials are
    /// computed in parallel.
    pub fn bilinear<G>(&self, other: &SeriesMap<F>, out_dim: usize, f: G) -> SeriesMap<F>
    where
        G: Fn(&[F], &[F], &mut [F]) + Sync,
    {
        assert_eq!(self.num_vars, other.num_vars, "series arity");
        let trunc = self.trunc.min(other.trunc);
        let (Some(va), Some(vb)) = (self.valuation(), other.valuation()) else {
            return SeriesMap::zeros(self.num_vars, trunc, out_dim);
        };
        let targets: Vec<Monomial> = (va + vb..=trunc).flat_map(|d| Monomial::of_degree(self.num_vars, d)).collect();
        let computed: Vec<(Monomial, Vec<F>)> = targets
            .into_par_iter()
            .filter_map(|gamma| {
                let mut acc = vec![F::zero(); out_dim];
                let mut touched = false;
                for alpha in gamma.divisors() {
                    let Some(a) = self.coeffs.get(&alpha) else { continue };
                    let beta = alpha.complement_in(&gamma).expect("divisor");
                    let Some(b) = other.coeffs.get(&beta) else { continue };
                    f(a, b, &mut acc);
                    touched = true;
                }
                (touched && acc.iter().any(|x| !x.is_zero())).then_some((gamma, acc))
            })
            .collect();
        SeriesMap { num_vars: self.num_vars, trunc, target_dim: out_dim, coeffs: computed.into_iter().collect() }
    }

    /// Product with a scalar-valued series.
    pub fn mul_scalar_series(&self, s: &SeriesMap<F>) -> Self {
        assert_eq!(s.target_dim, 1);
        self.bilinear(s, self.target_dim, |a, b, out| {
            for (o, x) in out.iter_mut().zip(a) {
                o.add_mul_assign(x, &b[0]);
            }
        })
    }

    /// `∂/∂x_i`; the truncation bound drops by one.
    pub fn partial(&self, i: usize) -> Self {
        assert!(i < self.num_vars, "variable index");
        assert!(self.trunc >= 1, "derivative of a series known only at degree 0");
        let mut out = SeriesMap { trunc: self.trunc - 1, ..self.shell() };
        for (m, v) in &self.coeffs {
            if let Some(q) = m.div_var(i) {
                let e = F::from_int(m.exponents()[i] as i64);
                let w: Vec<F> = v.iter().map(|x| x.mul_ref(&e)).collect();
                out.add_term(q, &w);
            }
        }
        out
    }

    /// `x_i · self`; the truncation bound rises by one.
    pub fn mul_coord(&self, i: usize) -> Self {
        let coeffs = self.coeffs.iter().map(|(m, v)| (m.mul_var(i), v.clone())).collect();
        SeriesMap { coeffs, trunc: self.trunc + 1, ..self.shell() }
    }

    /// Substitutes `λ = ε·p` and returns the one-variable series in `ε`.
    pub fn substitute_line(&self, p: &[F]) -> SeriesMap<F> {
        assert_eq!(p.len(), self.num_vars);
        let mut out = SeriesMap::zeros(1, self.trunc, self.target_dim);
        for (m, v) in &self.coeffs {
            let mut c = F::one();
            for (x, &e) in p.iter().zip(m.exponents()) {
                for _ in 0..e {
                    c = c.mul_ref(x);
                }
            }
            if c.is_zero() {
                continue;
            }
            let w: Vec<F> = v.iter().map(|x| x.mul_ref(&c)).collect();
            out.add_term(Monomial::from_exponents(vec![m.degree() as u32]), &w);
        }
        out
    }

    /// Value of the truncated polynomial at `λ = p`.
    pub fn evaluate(&self, p: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.target_dim];
        for (m, v) in &self.coeffs {
            let mut c = F::one();
            for (x, &e) in p.iter().zip(m.exponents()) {
                for _ in 0..e {
                    c = c.mul_ref(x);
                }
            }
            for (o, x) in out.iter_mut().zip(v) {
                o.add_mul_assign(&c, x);
            }
        }
        out
    }
}

impl<F: Scalar> fmt::Debug for SeriesMap<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SeriesMap(r={}, K={}, dim={}) {{", self.num_vars, self.trunc, self.target_dim)?;
        for (m, v) in &self.coeffs {
            let entries: Vec<String> =
                v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| format!("{i}: {x}")).collect();
            writeln!(f, "  {m}: [{}]", entries.join(", "))?;
        }
        write!(f, "}}")
    }
}
