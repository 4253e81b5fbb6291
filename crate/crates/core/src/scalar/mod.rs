//! Exact coefficient fields.
//!
//! Every coefficient in the engine lives in one field chosen up front: the
//! rationals, or a cyclotomic extension `Q(zeta_N)` when an automorphism of
//! order three or more is in play. The field is a type parameter, so operands
//! from different fields cannot meet at runtime; the only place a mismatch can
//! surface is when a literal is parsed.

mod coth;
mod cyclotomic;
mod rational;

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use thiserror::Error;

pub use coth::coth_shift_series;
pub use cyclotomic::{cyclotomic_polynomial, euler_phi, Cyclotomic};
pub use rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: session field is {expected}, operand belongs to {found}")]
    FieldMismatch { expected: String, found: String },
    #[error("field {field} does not contain a primitive {n}-th root of unity")]
    MissingRootOfUnity { n: u32, field: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal arithmetic error: {0}")]
    Internal(String),
}

/// Which field a session runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rational,
    Cyclotomic(usize),
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rational => write!(f, "rational"),
            FieldKind::Cyclotomic(n) => write!(f, "cyclotomic:{n}"),
        }
    }
}

impl std::str::FromStr for FieldKind {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "rational" {
            return Ok(FieldKind::Rational);
        }
        if let Some(n) = s.strip_prefix("cyclotomic:") {
            let n: usize = n
                .parse()
                .map_err(|_| ScalarError::Parse(format!("bad cyclotomic order in {s:?}")))?;
            if n == 0 {
                return Err(ScalarError::Parse("cyclotomic order must be positive".into()));
            }
            return Ok(FieldKind::Cyclotomic(n));
        }
        Err(ScalarError::Parse(format!("unknown field {s:?} (expected rational or cyclotomic:N)")))
    }
}

/// An exact field element.
pub trait Scalar:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_rational(q: &Rational) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&Rational::from_int(n))
    }

    fn from_ratio(p: i64, q: i64) -> Self {
        Self::from_rational(&Rational::new(p, q))
    }

    fn mul_ref(&self, other: &Self) -> Self;

    /// `self += a * b`
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        *self += &a.mul_ref(b);
    }

    fn inverse(&self) -> Result<Self, ScalarError>;

    fn checked_div(&self, other: &Self) -> Result<Self, ScalarError> {
        Ok(self.mul_ref(&other.inverse()?))
    }

    /// `zeta_n^j` with `zeta_n = exp(2 pi i / n)`, if the field contains it.
    fn root_of_unity(n: u32, j: u32) -> Option<Self>;

    fn field_kind() -> FieldKind;

    fn to_json(&self) -> serde_json::Value;
    fn from_json(v: &serde_json::Value) -> Result<Self, ScalarError>;

    /// The element as a rational, when it lies in the prime field.
    fn to_rational(&self) -> Option<Rational>;

    fn scaled(&self, q: &Rational) -> Self {
        self.mul_ref(&Self::from_rational(q))
    }
}
