use serde::Serialize;

use crate::scalar::Scalar;

use super::{Automorphism, Casimir, LieAlgebra};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passed(&self, name: &str) -> bool {
        self.get(name).is_some_and(|c| c.passed)
    }
}

fn check(name: &str, witness: Option<String>) -> CheckResult {
    CheckResult { name: name.to_string(), passed: witness.is_none(), witness }
}

fn render<F: Scalar>(alg: &LieAlgebra<F>, v: &[F]) -> String {
    let terms: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| format!("({c})*{}", alg.labels()[k]))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn antisymmetry<F: Scalar>(alg: &LieAlgebra<F>) -> Option<String> {
    let d = alg.dim();
    for i in 0..d {
        for j in i..d {
            let a = alg.bracket(&alg.basis_vector(i), &alg.basis_vector(j));
            let b = alg.bracket(&alg.basis_vector(j), &alg.basis_vector(i));
            if a.iter().zip(&b).any(|(x, y)| !(x.clone() + y.clone()).is_zero()) {
                let l = alg.labels();
                return Some(format!("[{}, {}] = {} but [{}, {}] = {}", l[i], l[j], render(alg, &a), l[j], l[i], render(alg, &b)));
            }
        }
    }
    None
}

fn jacobi<F: Scalar>(alg: &LieAlgebra<F>) -> Option<String> {
    let d = alg.dim();
    let e = |i| alg.basis_vector(i);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let t1 = alg.bracket(&e(i), &alg.bracket(&e(j), &e(k)));
                let t2 = alg.bracket(&e(j), &alg.bracket(&e(k), &e(i)));
                let t3 = alg.bracket(&e(k), &alg.bracket(&e(i), &e(j)));
                let sum: Vec<F> = (0..d).map(|n| t1[n].clone() + t2[n].clone() + t3[n].clone()).collect();
                if sum.iter().any(|x| !x.is_zero()) {
                    let l = alg.labels();
                    return Some(format!("({}, {}, {}): cyclic sum = {}", l[i], l[j], l[k], render(alg, &sum)));
                }
            }
        }
    }
    None
}

/// First pair `x ∈ l`, `y ∈ targets` whose bracket leaves the span selected by `inside`.
fn closure<F: Scalar>(alg: &LieAlgebra<F>, targets: &[usize], inside: impl Fn(usize) -> bool) -> Option<String> {
    for &i in alg.l_indices() {
        for &j in targets {
            let b = alg.bracket(&alg.basis_vector(i), &alg.basis_vector(j));
            if b.iter().enumerate().any(|(k, c)| !c.is_zero() && !inside(k)) {
                let l = alg.labels();
                return Some(format!("[{}, {}] = {}", l[i], l[j], render(alg, &b)));
            }
        }
    }
    None
}

/// Checks the standing hypotheses: Lie axioms, `l` a subalgebra, condition
/// i) `[l, m] ⊆ m`, invariance and condition ii) for `Ω`, and the
/// automorphism axioms. Never fails; every check is reported.
pub fn validate<F: Scalar>(
    alg: &LieAlgebra<F>,
    casimir: Option<&Casimir<F>>,
    automorphism: Option<&Automorphism<F>>,
) -> ValidationReport {
    let mut checks = vec![
        check("antisymmetry", antisymmetry(alg)),
        check("jacobi", jacobi(alg)),
        check("l_closed", closure(alg, alg.l_indices(), |k| alg.in_l(k))),
        check("condition_i", closure(alg, alg.m_indices(), |k| !alg.in_l(k))),
    ];
    if let Some(c) = casimir {
        let omega = c.omega();
        let shape = (omega.dim() != alg.dim()).then(|| format!("Omega has dimension {}", omega.dim()));
        if shape.is_some() {
            checks.push(check("omega_shape", shape));
        } else {
            let l = alg.labels();
            let sym = (0..alg.dim())
                .flat_map(|a| (0..alg.dim()).map(move |b| (a, b)))
                .find(|&(a, b)| omega.get(a, b) != omega.get(b, a))
                .map(|(a, b)| format!("Omega[{}, {}] = {} but Omega[{}, {}] = {}", l[a], l[b], omega.get(a, b), l[b], l[a], omega.get(b, a)));
            checks.push(check("omega_symmetric", sym));
            let inv = (0..alg.dim())
                .find(|&x| !omega.adjoint_action(alg, &alg.basis_vector(x)).is_zero())
                .map(|x| format!("[{0}⊗1 + 1⊗{0}, Omega] ≠ 0", l[x]));
            checks.push(check("omega_invariant", inv));
            let split = (0..alg.dim())
                .flat_map(|a| (0..alg.dim()).map(move |b| (a, b)))
                .find(|&(a, b)| alg.in_l(a) != alg.in_l(b) && !omega.get(a, b).is_zero())
                .map(|(a, b)| format!("Omega[{}, {}] = {} mixes l and m", l[a], l[b], omega.get(a, b)));
            checks.push(check("condition_ii", split));
        }
    }
    if let Some(b) = automorphism {
        if b.matrix().rows() != alg.dim() {
            checks.push(check("automorphism_shape", Some(format!("matrix has size {}", b.matrix().rows()))));
        } else {
            let l = alg.labels();
            let hom = b
                .homomorphism_defect(alg)
                .map(|(i, j)| format!("B[{0}, {1}] ≠ [B{0}, B{1}]", l[i], l[j]));
            checks.push(check("automorphism_homomorphism", hom));
            checks.push(check(
                "automorphism_order",
                (!b.has_order()).then(|| format!("B^{} ≠ 1", b.order())),
            ));
            if let Some(form) = casimir.and_then(|c| c.form()) {
                checks.push(check(
                    "automorphism_form",
                    (!b.preserves_form(form)).then(|| "B does not preserve the form".to_string()),
                ));
            }
        }
    }
    ValidationReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::library;
    use crate::scalar::Rational;
    use crate::tensor::Tensor2;

    #[test]
    fn sl2_cartan_split_passes() {
        let (g, c) = library::sl2::<Rational>();
        let g = g.with_subalgebra(vec![2]).unwrap();
        let report = validate(&g, Some(&c), None);
        assert!(report.all_passed(), "{report:?}");
        assert_eq!(report.checks.len(), 7);
    }

    #[test]
    fn xu_algebra_fails_condition_i() {
        let g = library::xu::<Rational>();
        let report = validate(&g, None, None);
        assert!(report.passed("jacobi"));
        assert!(report.passed("l_closed"));
        let ci = report.get("condition_i").unwrap();
        assert!(!ci.passed);
        assert_eq!(ci.witness.as_deref(), Some("[y, x] = (-1)*y"));
    }

    #[test]
    fn abelian_with_zero_omega_passes() {
        let g = library::abelian::<Rational>(3).with_subalgebra(vec![1]).unwrap();
        let c = Casimir::new(Tensor2::zeros(3));
        assert!(validate(&g, Some(&c), None).all_passed());
    }

    #[test]
    fn broken_jacobi_and_antisymmetry_are_witnessed() {
        let q = |n| Rational::from_int(n);
        let labels = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        // [a,b] = a, [b,c] = b, [a,c] = c violates Jacobi; [c,c] = a violates antisymmetry
        let g = LieAlgebra::new(
            labels,
            vec![(0, 1, vec![(0, q(1))]), (1, 2, vec![(1, q(1))]), (0, 2, vec![(2, q(1))]), (2, 2, vec![(0, q(1))])],
            vec![],
        )
        .unwrap();
        let report = validate(&g, None, None);
        assert!(!report.passed("antisymmetry"));
        assert!(!report.passed("jacobi"));
        assert!(report.get("jacobi").unwrap().witness.is_some());
    }

    #[test]
    fn non_invariant_omega_is_reported() {
        let (g, _) = library::sl2::<Rational>();
        let c = Casimir::new(Tensor2::from_entries(3, [(2, 2, Rational::one())]));
        let report = validate(&g, Some(&c), None);
        assert!(report.passed("omega_symmetric"));
        assert!(!report.passed("omega_invariant"));
    }

    #[test]
    fn automorphism_checks() {
        let (g, c) = library::sl2::<Rational>();
        let b = library::sl2_inner_involution::<Rational>();
        let report = validate(&g, Some(&c), Some(&b));
        assert!(report.passed("automorphism_homomorphism"));
        assert!(report.passed("automorphism_order"));
        assert!(report.passed("automorphism_form"));
    }

    #[test]
    fn deterministic() {
        let g = library::xu::<Rational>();
        assert_eq!(validate(&g, None, None), validate(&g, None, None));
    }
}
