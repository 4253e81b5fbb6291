use crate::lie::LieAlgebra;
use crate::scalar::{coth_shift_series, Scalar};
use crate::series::SeriesMap;

fn bracket<F: Scalar>(alg: &LieAlgebra<F>, a: &SeriesMap<F>, b: &SeriesMap<F>) -> SeriesMap<F> {
    let d = alg.dim();
    a.bilinear(b, d, |x, y, out| {
        for (o, v) in out.iter_mut().zip(alg.bracket(x, y)) {
            *o += &v;
        }
    })
}

/// Compositions of `n` into `parts` positive parts.
fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=n.saturating_sub(parts - 1) {
        for mut rest in compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `log(e^x e^y)` for series `x, y` vanishing at 0, through the smaller
/// truncation, by the recursion
///
/// `(n+1) Z_{n+1} = ½[x − y, Z_n] + Σ_{p≥1} K_{2p} Σ_{k_1+…+k_{2p}=n} [Z_{k_1}, [… , [Z_{k_{2p}}, x + y]…]]`
///
/// with `K_{2p} = B_{2p}/(2p)!` and `Z_n` the part of word length `n`.
pub fn bch<F: Scalar>(alg: &LieAlgebra<F>, x: &SeriesMap<F>, y: &SeriesMap<F>) -> SeriesMap<F> {
    assert!(x.constant_term().iter().all(|c| c.is_zero()) && y.constant_term().iter().all(|c| c.is_zero()));
    let trunc = x.trunc().min(y.trunc());
    let x = x.truncated(trunc);
    let y = y.truncated(trunc);
    // Z_n has valuation at least n, so n ≤ trunc suffices.
    let f0: Vec<F> = coth_shift_series(1, 0, trunc + 1).expect("rational coefficients");
    let k2p = |p: usize| -f0[2 * p - 1].clone();
    let sum = x.add(&y);
    let diff = x.sub(&y);
    let mut z: Vec<SeriesMap<F>> = vec![SeriesMap::zeros(x.num_vars(), trunc, alg.dim()), sum.clone()];
    for n in 1..trunc {
        let mut acc = bracket(alg, &diff, &z[n]).scale(&F::from_ratio(1, 2));
        let mut p = 1;
        while 2 * p <= n {
            let c = k2p(p);
            if !c.is_zero() {
                for ks in compositions(n, 2 * p) {
                    let mut inner = sum.clone();
                    for &k in ks.iter().rev() {
                        inner = bracket(alg, &z[k], &inner);
                        if inner.is_zero() {
                            break;
                        }
                    }
                    acc = acc.add(&inner.scale(&c));
                }
            }
            p += 1;
        }
        z.push(acc.scale(&F::from_ratio(1, (n + 1) as i64)));
    }
    z.into_iter().fold(SeriesMap::zeros(x.num_vars(), trunc, alg.dim()), |a, b| a.add(&b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::scalar::Rational;
    use crate::series::Monomial;

    /// Strictly upper-triangular 4×4 matrices as a Lie algebra with basis E_ij, i < j.
    fn n4() -> (LieAlgebra<Rational>, Vec<(usize, usize)>) {
        let pairs: Vec<(usize, usize)> = (0..4).flat_map(|i| ((i + 1)..4).map(move |j| (i, j))).collect();
        let index = |p: (usize, usize)| pairs.iter().position(|&q| q == p);
        let mut entries = Vec::new();
        for (a, &(i, j)) in pairs.iter().enumerate() {
            for (b, &(k, l)) in pairs.iter().enumerate() {
                let mut terms = Vec::new();
                if j == k {
                    terms.push((index((i, l)).unwrap(), Rational::one()));
                }
                if l == i {
                    terms.push((index((k, j)).unwrap(), -Rational::one()));
                }
                if !terms.is_empty() {
                    entries.push((a, b, terms));
                }
            }
        }
        let labels = pairs.iter().map(|(i, j)| format!("E{i}{j}")).collect();
        (LieAlgebra::new(labels, entries, vec![0]).unwrap(), pairs)
    }

    fn to_matrix(v: &[Rational], pairs: &[(usize, usize)]) -> Matrix<Rational> {
        let mut m = Matrix::zeros(4, 4);
        for (c, &(i, j)) in v.iter().zip(pairs) {
            m[(i, j)] = c.clone();
        }
        m
    }

    fn exp_nil(m: &Matrix<Rational>) -> Matrix<Rational> {
        let mut out = Matrix::identity(4);
        let mut p = Matrix::identity(4);
        for k in 1..4 {
            p = p.mul(m);
            out = out.sub(&p.scale(&-Rational::inv_factorial(k)));
        }
        out
    }

    fn log_unipotent(u: &Matrix<Rational>) -> Matrix<Rational> {
        let n = u.sub(&Matrix::identity(4));
        let mut out = Matrix::zeros(4, 4);
        let mut p = Matrix::identity(4);
        for k in 1..4 {
            p = p.mul(&n);
            let c = Rational::new(if k % 2 == 1 { 1 } else { -1 }, k as i64);
            out = out.sub(&p.scale(&-c));
        }
        out
    }

    #[test]
    fn matches_nilpotent_matrix_logarithm() {
        // constant-in-λ data scaled by λ so the series vanish at 0
        let (alg, pairs) = n4();
        let xv: Vec<Rational> = [1, -2, 3, 1, 0, 2].iter().map(|&c| Rational::new(c, 3)).collect();
        let yv: Vec<Rational> = [0, 5, -1, 2, 1, -1].iter().map(|&c| Rational::new(c, 2)).collect();
        let x = SeriesMap::coordinate_times(1, 4, 0, xv.clone());
        let y = SeriesMap::coordinate_times(1, 4, 0, yv.clone());
        let z = bch(&alg, &x, &y);
        // at λ = 1 the series is a polynomial of degree ≤ 3 (nilpotency class 3)
        let got = to_matrix(&z.evaluate(&[Rational::one()]), &pairs);
        let expected = log_unipotent(&exp_nil(&to_matrix(&xv, &pairs)).mul(&exp_nil(&to_matrix(&yv, &pairs))));
        assert_eq!(got, expected);
        assert!(z.coeff(&Monomial::from_exponents(vec![4])).is_none());
    }

    #[test]
    fn abelian_collapse() {
        let alg = crate::lie::library::abelian::<Rational>(2);
        let x = SeriesMap::coordinate_times(2, 3, 0, vec![Rational::one(), Rational::zero()]);
        let y = SeriesMap::coordinate_times(2, 3, 1, vec![Rational::one(), Rational::from_int(2)]);
        assert_eq!(bch(&alg, &x, &y), x.add(&y));
    }
}
