use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::OnceLock;

use super::{FieldKind, Rational, Scalar, ScalarError};

const TABLE_SIZE: usize = 65;

pub fn euler_phi(n: usize) -> usize {
    assert!(n > 0);
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn compute_cyclotomic(n: usize) -> Vec<i64> {
    // x^n - 1 divided by every Phi_d with d | n, d < n.
    let mut num = vec![0i64; n + 1];
    num[0] = -1;
    num[n] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let div = cyclotomic_polynomial(d);
            num = exact_div_monic(&num, &div);
        }
    }
    num
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                rem[k + i] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "non-exact cyclotomic division");
    quot
}

/// Coefficients of the `n`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: usize) -> Vec<i64> {
    static TABLE: OnceLock<Vec<Vec<i64>>> = OnceLock::new();
    if n < TABLE_SIZE {
        let table = TABLE.get_or_init(|| {
            let mut t: Vec<Vec<i64>> = vec![Vec::new(); TABLE_SIZE];
            t[1] = vec![-1, 1];
            for m in 2..TABLE_SIZE {
                let mut num = vec![0i64; m + 1];
                num[0] = -1;
                num[m] = 1;
                for d in 1..m {
                    if m % d == 0 {
                        num = exact_div_monic(&num, &t[d]);
                    }
                }
                t[m] = num;
            }
            t
        });
        table[n].clone()
    } else {
        compute_cyclotomic(n)
    }
}

/// Element of `Q(zeta_N)`, stored as a polynomial in `zeta_N` of degree
/// below `phi(N)`, reduced modulo the cyclotomic polynomial.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic<const N: usize> {
    coords: Vec<Rational>,
}

impl<const N: usize> Cyclotomic<N> {
    pub fn degree() -> usize {
        euler_phi(N)
    }

    pub fn from_coords(coords: Vec<Rational>) -> Result<Self, ScalarError> {
        if coords.len() != Self::degree() {
            return Err(ScalarError::Parse(format!(
                "cyclotomic:{N} element needs {} coordinates, got {}",
                Self::degree(),
                coords.len()
            )));
        }
        Ok(Cyclotomic { coords })
    }

    /// Reduces an arbitrary polynomial in `zeta_N`.
    pub fn from_poly(poly: Vec<Rational>) -> Self {
        Cyclotomic { coords: reduce(poly, N) }
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// The generator `zeta_N`.
    pub fn zeta() -> Self {
        let mut poly = vec![Rational::zero(); 2];
        poly[1] = Rational::one();
        Self::from_poly(poly)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            base = base.mul_ref(&base);
            e >>= 1;
        }
        acc
    }
}

fn reduce(mut poly: Vec<Rational>, n: usize) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(n);
    let d = phi.len() - 1;
    while poly.len() > d {
        let top = poly.pop().unwrap();
        if top.is_zero() {
            continue;
        }
        let shift = poly.len() - d;
        for (i, &c) in phi.iter().enumerate().take(d) {
            if c != 0 {
                let t = top.mul_ref(&Rational::from_int(c));
                poly[shift + i] -= &t;
            }
        }
    }
    poly.resize(d, Rational::zero());
    poly
}

fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j].add_mul_assign(x, y);
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let len = a.len().max(b.len());
    let mut out = vec![Rational::zero(); len];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead_inv = b[db].inverse().expect("nonzero leading coefficient");
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let k = rem.len() - 1 - db;
        let c = rem[rem.len() - 1].mul_ref(&lead_inv);
        for (i, bi) in b.iter().enumerate() {
            rem[k + i] -= &c.mul_ref(bi);
        }
        quot[k] = c;
        trim(&mut rem);
    }
    (quot, rem)
}

impl<const N: usize> Scalar for Cyclotomic<N> {
    fn zero() -> Self {
        Cyclotomic { coords: vec![Rational::zero(); Self::degree()] }
    }

    fn one() -> Self {
        let mut coords = vec![Rational::zero(); Self::degree()];
        coords[0] = Rational::one();
        Cyclotomic { coords }
    }

    fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    fn from_rational(q: &Rational) -> Self {
        let mut coords = vec![Rational::zero(); Self::degree()];
        coords[0] = q.clone();
        Cyclotomic { coords }
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Cyclotomic { coords: reduce(poly_mul(&self.coords, &other.coords), N) }
    }

    fn inverse(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        // Extended Euclid: find u with self * u = 1 mod Phi_N.
        let modulus: Vec<Rational> =
            cyclotomic_polynomial(N).into_iter().map(Rational::from_int).collect();
        let mut a = self.coords.clone();
        trim(&mut a);
        let (mut r0, mut r1) = (modulus, a);
        let (mut s0, mut s1): (Vec<Rational>, Vec<Rational>) = (Vec::new(), vec![Rational::one()]);
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        if r0.len() != 1 {
            return Err(ScalarError::Internal(format!(
                "element of cyclotomic:{N} shares a factor with the modulus"
            )));
        }
        let c = r0[0].inverse()?;
        let u: Vec<Rational> = s0.iter().map(|x| x.mul_ref(&c)).collect();
        Ok(Self::from_poly(u))
    }

    fn root_of_unity(n: u32, j: u32) -> Option<Self> {
        let n = n as usize;
        let j = j as usize % n.max(1);
        if n == 0 {
            return None;
        }
        if N.is_multiple_of(n) {
            return Some(Self::zeta().pow((j * (N / n)) as u64));
        }
        // For odd N the field also contains the 2N-th roots: zeta_{2N} = -zeta_N^{(N+1)/2}.
        if N % 2 == 1 && (2 * N).is_multiple_of(n) {
            let m = j * (2 * N / n);
            let base = -Self::zeta().pow(N.div_ceil(2) as u64);
            return Some(base.pow(m as u64));
        }
        None
    }

    fn field_kind() -> FieldKind {
        FieldKind::Cyclotomic(N)
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "order": N,
            "coords": self.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }

    fn from_json(v: &serde_json::Value) -> Result<Self, ScalarError> {
        match v {
            serde_json::Value::String(_) | serde_json::Value::Number(_) => {
                Ok(Self::from_rational(&Rational::from_json(v)?))
            }
            serde_json::Value::Object(map) => {
                let order = map
                    .get("order")
                    .and_then(|o| o.as_u64())
                    .ok_or_else(|| ScalarError::Parse("cyclotomic literal without order".into()))?
                    as usize;
                let coords = map
                    .get("coords")
                    .and_then(|c| c.as_array())
                    .ok_or_else(|| ScalarError::Parse("cyclotomic literal without coords".into()))?;
                let coords: Vec<Rational> =
                    coords.iter().map(Rational::from_json).collect::<Result<_, _>>()?;
                if order == N {
                    return Self::from_coords(coords);
                }
                if (order == 1 || order == 2) && coords.len() == 1 {
                    return Ok(Self::from_rational(&coords[0]));
                }
                Err(ScalarError::FieldMismatch {
                    expected: FieldKind::Cyclotomic(N).to_string(),
                    found: format!("cyclotomic:{order}"),
                })
            }
            other => Err(ScalarError::Parse(format!("expected cyclotomic literal, found {other}"))),
        }
    }

    fn to_rational(&self) -> Option<Rational> {
        if self.coords.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }
}

impl<const N: usize> fmt::Display for Cyclotomic<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => c.to_string(),
                1 => format!("({c})*z{N}"),
                _ => format!("({c})*z{N}^{k}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl<const N: usize> fmt::Debug for Cyclotomic<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<const N: usize> Add for Cyclotomic<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += &rhs;
        self
    }
}

impl<const N: usize> Sub for Cyclotomic<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= &rhs;
        self
    }
}

impl<const N: usize> Mul for Cyclotomic<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<const N: usize> Neg for Cyclotomic<N> {
    type Output = Self;
    fn neg(self) -> Self {
        Cyclotomic { coords: self.coords.into_iter().map(|c| -c).collect() }
    }
}

impl<'a, const N: usize> AddAssign<&'a Cyclotomic<N>> for Cyclotomic<N> {
    fn add_assign(&mut self, rhs: &'a Cyclotomic<N>) {
        for (a, b) in self.coords.iter_mut().zip(&rhs.coords) {
            *a += b;
        }
    }
}

impl<'a, const N: usize> SubAssign<&'a Cyclotomic<N>> for Cyclotomic<N> {
    fn sub_assign(&mut self, rhs: &'a Cyclotomic<N>) {
        for (a, b) in self.coords.iter_mut().zip(&rhs.coords) {
            *a -= b;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q4 = Cyclotomic<4>;
    type Q3 = Cyclotomic<3>;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(compute_cyclotomic(12), cyclotomic_polynomial(12));
        for n in 1..40 {
            assert_eq!(cyclotomic_polynomial(n).len() - 1, euler_phi(n));
        }
    }

    #[test]
    fn zeta2_plus_one_is_zero() {
        let z = Cyclotomic::<2>::zeta();
        assert!((z + Cyclotomic::<2>::one()).is_zero());
    }

    #[test]
    fn zeta4_squared_is_minus_one() {
        let z = Q4::zeta();
        assert_eq!(z.mul_ref(&z), -Q4::one());
    }

    #[test]
    fn inverse_and_division() {
        let z = Q3::zeta();
        let a = z.clone() + Q3::from_int(2);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul_ref(&inv), Q3::one());
        assert_eq!(Q3::zero().inverse(), Err(ScalarError::DivisionByZero));
        assert_eq!(z.pow(3), Q3::one());
    }

    #[test]
    fn roots_of_unity() {
        // zeta_6 lives in Q(zeta_3).
        let z6 = Q3::root_of_unity(6, 1).unwrap();
        assert_eq!(z6.pow(6), Q3::one());
        assert_ne!(z6.pow(3), Q3::one());
        assert_ne!(z6.pow(2), Q3::one());
        assert_eq!(Q4::root_of_unity(2, 1).unwrap(), -Q4::one());
        assert!(Q4::root_of_unity(3, 1).is_none());
    }

    #[test]
    fn mixed_order_literal_is_rejected() {
        let v = serde_json::json!({"order": 4, "coords": ["0", "1"]});
        assert!(matches!(Q3::from_json(&v), Err(ScalarError::FieldMismatch { .. })));
        assert_eq!(Q4::from_json(&v).unwrap(), Q4::zeta());
        assert_eq!(Q4::from_json(&Q4::zeta().to_json()).unwrap(), Q4::zeta());
    }
}
