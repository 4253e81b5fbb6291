//! Series with matrix values, stored row-major in the coefficient vector.

use crate::linalg::Matrix;
use crate::scalar::Scalar;

use super::{Monomial, SeriesMap};

/// `(rows × inner)·(inner × cols)` coefficientwise Cauchy product.
pub fn matrix_product<F: Scalar>(
    a: &SeriesMap<F>,
    b: &SeriesMap<F>,
    rows: usize,
    inner: usize,
    cols: usize,
) -> SeriesMap<F> {
    assert_eq!(a.target_dim(), rows * inner);
    assert_eq!(b.target_dim(), inner * cols);
    a.bilinear(b, rows * cols, |x, y, out| {
        for i in 0..rows {
            for k in 0..inner {
                let xik = &x[i * inner + k];
                if xik.is_zero() {
                    continue;
                }
                for j in 0..cols {
                    out[i * cols + j].add_mul_assign(xik, &y[k * cols + j]);
                }
            }
        }
    })
}

/// Matrix series applied to a vector series.
pub fn apply<F: Scalar>(m: &SeriesMap<F>, v: &SeriesMap<F>, rows: usize, cols: usize) -> SeriesMap<F> {
    matrix_product(m, v, rows, cols, 1)
}

/// `Σ_p x_p M_p`
pub fn linear<F: Scalar>(num_vars: usize, trunc: usize, mats: &[Matrix<F>]) -> SeriesMap<F> {
    assert_eq!(mats.len(), num_vars);
    let dim = mats.first().map_or(0, |m| m.rows() * m.cols());
    let mut s = SeriesMap::zeros(num_vars, trunc, dim);
    for (p, m) in mats.iter().enumerate() {
        s.add_term(Monomial::var(num_vars, p), m.data());
    }
    s
}

/// Constant identity `n × n`.
pub fn identity<F: Scalar>(num_vars: usize, trunc: usize, n: usize) -> SeriesMap<F> {
    SeriesMap::constant(num_vars, trunc, Matrix::<F>::identity(n).into_data())
}

/// `Σ_k c_k M^k` for a matrix series `M` with `M(0) = 0`.
pub fn power_series<F: Scalar>(m: &SeriesMap<F>, n: usize, coeffs: &[F]) -> SeriesMap<F> {
    assert!(m.constant_term().iter().all(|x| x.is_zero()), "argument must vanish at 0");
    let trunc = m.trunc();
    let mut out = SeriesMap::zeros(m.num_vars(), trunc, n * n);
    let mut power = identity(m.num_vars(), trunc, n);
    for (k, c) in coeffs.iter().enumerate() {
        if k > trunc {
            break;
        }
        if k > 0 {
            power = matrix_product(&power, m, n, n, n);
        }
        if !c.is_zero() {
            out = out.add(&power.scale(c));
        }
    }
    out
}

/// `exp(M)` through the truncation degree.
pub fn exp<F: Scalar>(m: &SeriesMap<F>, n: usize) -> SeriesMap<F> {
    let coeffs: Vec<F> = (0..=m.trunc()).map(|k| F::from_rational(&crate::scalar::Rational::inv_factorial(k))).collect();
    power_series(m, n, &coeffs)
}

pub fn transpose<F: Scalar>(m: &SeriesMap<F>, rows: usize, cols: usize) -> SeriesMap<F> {
    m.map_coeffs(rows * cols, |v| {
        let mut out = vec![F::zero(); rows * cols];
        for i in 0..rows {
            for j in 0..cols {
                out[j * rows + i] = v[i * cols + j].clone();
            }
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn exp_of_nilpotent_is_polynomial() {
        // M = x·N with N² = 0: exp(M) = 1 + xN exactly
        let n = Matrix::from_rows(vec![
            vec![Rational::zero(), Rational::one()],
            vec![Rational::zero(), Rational::zero()],
        ]);
        let m = linear(1, 5, std::slice::from_ref(&n));
        let e = exp(&m, 2);
        assert_eq!(e, identity(1, 5, 2).add(&m));
    }

    #[test]
    fn exp_of_scalar_matrix() {
        let m = linear(1, 4, &[Matrix::<Rational>::identity(1)]);
        let e = exp(&m, 1);
        for k in 0..=4 {
            let c = e.coeff_or_zero(&Monomial::from_exponents(vec![k as u32]));
            assert_eq!(c[0], Rational::inv_factorial(k));
        }
    }
}
