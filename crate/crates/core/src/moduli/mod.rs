//! The moduli variety `M_Ω` of admissible base points, the degree-by-degree
//! construction of the unique block-form extension of a moduli point, and
//! the flow on `Λ²m` whose tangency to `T_Ω` drives that construction.

use serde::Serialize;
use thiserror::Error;

use crate::lie::{Casimir, LieAlgebra, LieError};
use crate::rmatrix::{construct_am_subalgebra, cyb_series, verify, DynamicalRMatrix, RMatrixError, VerifyReport};
use crate::scalar::Scalar;
use crate::series::{equivariance_defect, euler_primitive, ClosednessError, OneFormSeries, SeriesMap};
use crate::tensor::{cyb, cyb_polarized, kernels, project_lambda3_quotient, Tensor2, Tensor3};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuliError {
    #[error("not a moduli point: {0}")]
    NotModuliPoint(String),
    #[error("not in T_Omega: {0}")]
    NotInTOmega(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("right-hand side in degree {degree} is not closed in (x{i}, x{j})")]
    NotClosed { degree: usize, i: usize, j: usize },
    #[error("degree-{degree} term leaves Λ²m")]
    BlockViolation { degree: usize },
    #[error("degree-{degree} term is not l-equivariant")]
    NotEquivariant { degree: usize },
    #[error("assembled r-matrix fails verification")]
    Verification(Box<VerifyReport>),
    #[error(transparent)]
    RMatrix(#[from] RMatrixError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// Outcome of [`is_moduli_point`], one flag per membership condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub antisymmetric: bool,
    pub in_lambda2_m: bool,
    pub l_invariant: bool,
    pub cyb_in_alt_l: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        self.antisymmetric && self.in_lambda2_m && self.l_invariant && self.cyb_in_alt_l
    }
}

fn first_l_defect<F: Scalar>(alg: &LieAlgebra<F>, t: &Tensor2<F>) -> Option<usize> {
    alg.l_indices().iter().copied().find(|&y| !t.adjoint_action(alg, &alg.basis_vector(y)).is_zero())
}

/// `x ∈ Ω/2 + (Λ²m)^l` with `CYB(x) = 0` in `Λ³(g/l)`.
pub fn is_moduli_point<F: Scalar>(alg: &LieAlgebra<F>, casimir: &Casimir<F>, x: &Tensor2<F>) -> Membership {
    let a = x.sub(&casimir.half());
    let antisymmetric = a.is_antisymmetric();
    let in_lambda2_m = antisymmetric && a.in_lambda2_m(alg);
    let defect = first_l_defect(alg, &a);
    let (_, cyb_in_alt_l) = project_lambda3_quotient(alg, &cyb(alg, x));
    let detail = if !antisymmetric {
        Some("x − Ω/2 is not antisymmetric".into())
    } else if !in_lambda2_m {
        Some("x − Ω/2 has a component touching l".into())
    } else if let Some(y) = defect {
        Some(format!("x − Ω/2 is moved by {}", alg.labels()[y]))
    } else if !cyb_in_alt_l {
        Some("CYB(x) is nonzero in Λ³(g/l)".into())
    } else {
        None
    };
    Membership { antisymmetric, in_lambda2_m, l_invariant: defect.is_none(), cyb_in_alt_l, detail }
}

/// A checked element of `M_Ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuliPoint<F: Scalar> {
    x: Tensor2<F>,
}

impl<F: Scalar> ModuliPoint<F> {
    pub fn new(alg: &LieAlgebra<F>, casimir: &Casimir<F>, x: Tensor2<F>) -> Result<Self, ModuliError> {
        let m = is_moduli_point(alg, casimir, &x);
        match m.detail {
            None => Ok(ModuliPoint { x }),
            Some(d) => Err(ModuliError::NotModuliPoint(d)),
        }
    }

    pub fn value(&self) -> &Tensor2<F> {
        &self.x
    }
}

/// A checked element of `T_Ω = {t ∈ Λ²m | CYB(t + Ω/2) = 0 in Λ³(g/l)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TOmegaElement<F: Scalar> {
    t: Tensor2<F>,
}

impl<F: Scalar> TOmegaElement<F> {
    pub fn new(alg: &LieAlgebra<F>, casimir: &Casimir<F>, t: Tensor2<F>) -> Result<Self, ModuliError> {
        if !t.in_lambda2_m(alg) {
            return Err(ModuliError::NotInTOmega("t is not in Λ²m".into()));
        }
        if !project_lambda3_quotient(alg, &cyb(alg, &t.add(&casimir.half()))).1 {
            return Err(ModuliError::NotInTOmega("CYB(t + Ω/2) is nonzero in Λ³(g/l)".into()));
        }
        Ok(TOmegaElement { t })
    }

    pub fn value(&self) -> &Tensor2<F> {
        &self.t
    }
}

/// `¼(CYB(Ω) − CYB(Ω_l))`
pub fn z_term<F: Scalar>(alg: &LieAlgebra<F>, casimir: &Casimir<F>) -> Tensor3<F> {
    let quarter = F::from_ratio(1, 4);
    cyb(alg, casimir.omega()).sub(&cyb(alg, &casimir.omega_l(alg))).scale(&quarter)
}

/// `(x_i^* ⊗ 1 ⊗ 1)y` with `x_i^*(y) = x_i^*(π y)`: the slice of the first leg at `l_i`.
fn pair_first_leg<F: Scalar>(d: usize, a: usize, y: &[F]) -> Vec<F> {
    y[a * d * d..(a + 1) * d * d].to_vec()
}

/// The right-hand sides `ω_i = −(x_i^*⊗1⊗1)[[t^{12}, t^{13}] + [s^{12} + s^{13}, t^{23}] + Z]_{k−1}`
/// of the system for `t_k`, where `t` is `t_{<k}`, `s = r^l_AM − Ω_l/2` and
/// `Z = ¼(Z_Ω − Z_{Ω_l})`.
///
/// The bracket is evaluated as `CYB(t) + CYB(s, t) + Z`. Its remaining terms
/// carry an `m` (or `[l, m] ⊆ m`) first leg and are removed by the pairing.
pub fn extension_rhs<F: Scalar>(
    alg: &LieAlgebra<F>,
    t: &SeriesMap<F>,
    s: &SeriesMap<F>,
    z: &Tensor3<F>,
    k: usize,
) -> OneFormSeries<F> {
    assert!(k >= 1);
    let d = alg.dim();
    let t = t.truncated(k - 1);
    let s = s.truncated(k - 1);
    let mut y = cyb_series(alg, &t).add(&t.bilinear(&s, d * d * d, |a, b, out| {
        kernels::cyb_bilinear_into(alg, a, b, out);
        kernels::cyb_bilinear_into(alg, b, a, out);
    }));
    if k == 1 {
        y = y.add(&SeriesMap::constant(alg.num_vars(), 0, z.data().to_vec()));
    }
    let y = y.homogeneous(k - 1);
    OneFormSeries::new(
        alg.l_indices()
            .iter()
            .map(|&a| y.map_coeffs(d * d, |v| pair_first_leg(d, a, v).into_iter().map(|x| -x).collect()))
            .collect(),
    )
}

/// The unique homogeneous `t_k` of degree `k` with `∂_i t_k = ω_i`, where
/// each `ω_i` is homogeneous of degree `k − 1`. Closedness, the `Λ²m`
/// block and `l`-equivariance are checked.
pub fn step_integrate<F: Scalar>(
    alg: &LieAlgebra<F>,
    omega: &OneFormSeries<F>,
    k: usize,
) -> Result<SeriesMap<F>, ModuliError> {
    let d = alg.dim();
    for c in omega.components() {
        if c.terms().any(|(m, v)| m.degree() + 1 != k || !Tensor2::from_data(d, v.clone()).in_lambda2_m(alg)) {
            return Err(ModuliError::BlockViolation { degree: k });
        }
    }
    let omega = OneFormSeries::new(omega.components().iter().map(|c| c.clone().with_trunc(k - 1)).collect());
    let t_k = euler_primitive(&omega).map_err(|ClosednessError { i, j, .. }| ModuliError::NotClosed { degree: k, i, j })?;
    for &y in alg.l_indices() {
        if !equivariance_defect(alg, &t_k, 2, y).is_zero() {
            return Err(ModuliError::NotEquivariant { degree: k });
        }
    }
    Ok(t_k)
}

/// `r = r^l_AM + Ω_m/2 + t`, the unique block-form extension of a moduli point.
#[derive(Debug, Clone)]
pub struct Extension<F: Scalar> {
    pub rmatrix: DynamicalRMatrix<F>,
    pub t: SeriesMap<F>,
    pub s: SeriesMap<F>,
    pub report: VerifyReport,
}

/// Builds `t = Σ t_k` from `t_0 = x − Ω/2` by integrating the system for
/// each `t_k` in turn, then verifies the assembled r-matrix.
pub fn solve_extension<F: Scalar>(
    alg: &LieAlgebra<F>,
    casimir: &Casimir<F>,
    x: &ModuliPoint<F>,
    trunc: usize,
) -> Result<Extension<F>, ModuliError> {
    if trunc == 0 {
        return Err(ModuliError::Precondition("truncation must be at least 1".into()));
    }
    let report = crate::lie::validate(alg, Some(casimir), None);
    for name in ["l_closed", "condition_i", "omega_invariant", "condition_ii"] {
        if !report.passed(name) {
            return Err(ModuliError::Precondition(format!("{name} fails")));
        }
    }
    let d = alg.dim();
    let am = construct_am_subalgebra(alg, casimir, trunc)?;
    let z = z_term(alg, casimir);
    let t0 = x.value().sub(&casimir.half());
    let mut t = SeriesMap::constant(alg.num_vars(), trunc, t0.into_data());
    for k in 1..=trunc {
        let omega = extension_rhs(alg, &t, &am.s, &z, k);
        let t_k = step_integrate(alg, &omega, k)?;
        t = t.add(&t_k.with_trunc(trunc));
    }
    let r = am.r.add(&t);
    debug_assert_eq!(r.target_dim(), d * d);
    let report = verify(alg, casimir.omega(), &r);
    if !report.passed() {
        return Err(ModuliError::Verification(Box::new(report)));
    }
    let rmatrix = DynamicalRMatrix::new(r, casimir.omega().clone());
    Ok(Extension { rmatrix, t, s: am.s, report })
}

/// The vector field `−(h_1 + h_2)` at `u`, with
/// `h_1 = (x^*⊗1⊗1)[s^{12} + s^{13}, u^{23}]` and
/// `h_2 = (x^*⊗1⊗1)([u^{12}, u^{13}] + ¼(Z_Ω − Z_{Ω_l}))`.
/// `s` is the value of `r^l_AM − Ω_l/2` at the point of interest (it vanishes at 0).
pub fn flow_field<F: Scalar>(
    alg: &LieAlgebra<F>,
    casimir: &Casimir<F>,
    u: &TOmegaElement<F>,
    xstar: &[F],
    s: &Tensor2<F>,
) -> Result<Tensor2<F>, ModuliError> {
    use crate::tensor::{bracket_legs, Legs};
    let d = alg.dim();
    if xstar.len() != alg.num_vars() {
        return Err(ModuliError::Precondition(format!("x* must have {} coordinates", alg.num_vars())));
    }
    let u = u.value();
    let pair = |y: &Tensor3<F>| -> Tensor2<F> {
        let mut out = vec![F::zero(); d * d];
        for (p, &a) in alg.l_indices().iter().enumerate() {
            if xstar[p].is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(pair_first_leg(d, a, y.data())) {
                o.add_mul_assign(&xstar[p], &v);
            }
        }
        Tensor2::from_data(d, out)
    };
    let inner1 = bracket_legs(alg, s, Legs::L12, u, Legs::L23).add(&bracket_legs(alg, s, Legs::L13, u, Legs::L23));
    let h1 = pair(&inner1);
    let h2 = pair(&bracket_legs(alg, u, Legs::L12, u, Legs::L13).add(&z_term(alg, casimir)));
    if !h1.in_lambda2_m(alg) || !h2.in_lambda2_m(alg) {
        return Err(ModuliError::BlockViolation { degree: 0 });
    }
    Ok(h1.add(&h2).scale(&-F::one()))
}

/// Image of `CYB(u, v)` in `Λ³(g/l)` for the flow vector `v` at `u`; zero
/// certifies that the flow is tangent to `T_Ω` at `u`.
pub fn tangency_residual<F: Scalar>(
    alg: &LieAlgebra<F>,
    casimir: &Casimir<F>,
    u: &TOmegaElement<F>,
    xstar: &[F],
    s: &Tensor2<F>,
) -> Result<Tensor3<F>, ModuliError> {
    let v = flow_field(alg, casimir, u, xstar, s)?;
    Ok(project_lambda3_quotient(alg, &cyb_polarized(alg, u.value(), &v)).0)
}

/// Coefficientwise image of `CYB(t + Ω/2)` in `Λ³(g/l)`; zero exactly when
/// the series `t` takes values in `T_Ω`.
pub fn t_omega_residual<F: Scalar>(alg: &LieAlgebra<F>, casimir: &Casimir<F>, t: &SeriesMap<F>) -> SeriesMap<F> {
    let d = alg.dim();
    let shifted = t.add(&SeriesMap::constant(t.num_vars(), t.trunc(), casimir.half().into_data()));
    cyb_series(alg, &shifted).map_coeffs(d * d * d, |v| {
        project_lambda3_quotient(alg, &Tensor3::from_data(d, v.to_vec())).0.into_data()
    })
}
