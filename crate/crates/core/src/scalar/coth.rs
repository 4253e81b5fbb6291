use super::{Rational, Scalar, ScalarError};

fn series_div<F: Scalar>(num: &[F], den: &[F], len: usize) -> Result<Vec<F>, ScalarError> {
    let d0_inv = den[0].inverse()?;
    let mut q: Vec<F> = Vec::with_capacity(len);
    for k in 0..len {
        let mut acc = num[k].clone();
        for i in 0..k {
            if k - i < den.len() {
                acc -= &q[i].mul_ref(&den[k - i]);
            }
        }
        q.push(acc.mul_ref(&d0_inv));
    }
    Ok(q)
}

/// Taylor coefficients `c_0..c_degree` at `s = 0` of
///
/// * `f_0(s) = 1/s - coth(s/2)/2` when `j = 0`,
/// * `f_j(s) = -coth((s + 2 pi i j/n)/2)/2` otherwise,
///
/// computed by exact series division using
/// `coth((s + 2 pi i j/n)/2) = (zeta_n^j e^s + 1)/(zeta_n^j e^s - 1)`.
pub fn coth_shift_series<F: Scalar>(n: u32, j: u32, degree: usize) -> Result<Vec<F>, ScalarError> {
    if n == 0 || j >= n {
        return Err(ScalarError::Parse(format!("residue {j} is not in 0..{n}")));
    }
    let len = degree + 1;
    let half = F::from_ratio(1, 2);
    if j == 0 {
        // f_0 = (E(s) - (e^s + 1)/2) / (s E(s)) with E(s) = (e^s - 1)/s.
        let e_coeff = |k: usize| Rational::inv_factorial(k + 1);
        let exp_coeff = |k: usize| Rational::inv_factorial(k);
        let p = |k: usize| {
            let mut v = e_coeff(k) - Rational::new(1, 2) * exp_coeff(k);
            if k == 0 {
                v = v - Rational::new(1, 2);
            }
            v
        };
        if !p(0).is_zero() {
            return Err(ScalarError::Internal("pole of f_0 does not cancel".into()));
        }
        let num: Vec<F> = (1..=len).map(|k| F::from_rational(&p(k))).collect();
        let den: Vec<F> = (0..len).map(|k| F::from_rational(&e_coeff(k))).collect();
        return series_div(&num, &den, len);
    }
    let zeta = F::root_of_unity(n, j).ok_or_else(|| ScalarError::MissingRootOfUnity {
        n,
        field: F::field_kind().to_string(),
    })?;
    let exp: Vec<F> = (0..len).map(|k| zeta.scaled(&Rational::inv_factorial(k))).collect();
    let mut num = exp.clone();
    num[0] += &F::one();
    let mut den = exp;
    den[0] -= &F::one();
    let coth = series_div(&num, &den, len)?;
    Ok(coth.into_iter().map(|c| -c.mul_ref(&half)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Cyclotomic;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p, d)
    }

    /// Oracle: Taylor coefficients of coth(x) · x from the Bernoulli numbers,
    /// B_{2k} computed by the classical recurrence sum_{i<m} C(m+1,i) B_i = -(m+1) B_m.
    fn bernoulli(m: usize) -> Vec<Rational> {
        let mut b = vec![Rational::one()];
        for k in 1..=m {
            let mut acc = Rational::zero();
            let mut binom = Rational::one();
            for (i, bi) in b.iter().enumerate() {
                // binom = C(k+1, i)
                acc += &binom.mul_ref(bi);
                binom = binom * Rational::from_int((k + 1 - i) as i64) * Rational::new(1, (i + 1) as i64);
            }
            b.push(-acc * Rational::new(1, (k + 1) as i64));
        }
        b
    }

    #[test]
    fn f0_matches_bernoulli_expansion() {
        // (s/2)coth(s/2) = sum B_{2k} s^{2k}/(2k)!, so f_0 = -sum_{k>=1} B_{2k} s^{2k-1}/(2k)!.
        let k_max = 12;
        let b = bernoulli(k_max + 2);
        let f0: Vec<Rational> = coth_shift_series(1, 0, k_max).unwrap();
        for (d, c) in f0.iter().enumerate() {
            let expected = if d % 2 == 1 {
                -(b[d + 1].clone() * Rational::inv_factorial(d + 1))
            } else {
                Rational::zero()
            };
            assert_eq!(c, &expected, "degree {d}");
        }
    }

    #[test]
    fn f0_low_order_terms() {
        let f0: Vec<Rational> = coth_shift_series(1, 0, 5).unwrap();
        assert_eq!(f0, vec![q(0, 1), q(-1, 12), q(0, 1), q(1, 720), q(0, 1), q(-1, 30240)]);
    }

    #[test]
    fn f1_of_order_two_is_half_tanh() {
        let f1: Vec<Rational> = coth_shift_series(2, 1, 3).unwrap();
        assert_eq!(f1, vec![q(0, 1), q(-1, 4), q(0, 1), q(1, 48)]);
    }

    #[test]
    fn constant_term_closed_form() {
        type C5 = Cyclotomic<5>;
        for j in 1..5u32 {
            let z = C5::root_of_unity(5, j).unwrap();
            let closed = -(z.clone() + C5::one())
                .checked_div(&(z - C5::one()))
                .unwrap()
                .mul_ref(&C5::from_ratio(1, 2));
            let series: Vec<C5> = coth_shift_series(5, j, 0).unwrap();
            assert_eq!(series[0], closed);
        }
    }

    #[test]
    fn f0_is_odd() {
        let f0: Vec<Rational> = coth_shift_series(3, 0, 12).unwrap();
        assert!(f0.iter().step_by(2).all(|c| c.is_zero()));
    }

    #[test]
    fn missing_root_is_reported() {
        let err = coth_shift_series::<Rational>(3, 1, 2).unwrap_err();
        assert!(matches!(err, ScalarError::MissingRootOfUnity { n: 3, .. }));
        assert!(coth_shift_series::<Rational>(3, 3, 2).is_err());
    }
}
