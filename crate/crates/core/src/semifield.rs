//! Scalar arithmetic of the idempotent semifield `(R ∪ {-inf}, max, +)`.
//!
//! Addition `oplus` is maximum, multiplication `otimes` is ordinary addition.
//! The additive zero is `-inf` (absorbing under `otimes`), the multiplicative
//! one is `0`. Every finite scalar has the inverse `-x`; the zero has none.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// Errors for partial scalar operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("negative power of zero is undefined")]
    NegativePowerOfZero,
    #[error("rational exponent has zero denominator")]
    ZeroDenominator,
    #[error("value {0} is not representable (NaN and +inf are rejected)")]
    NotRepresentable(f64),
}

/// An element of the max-plus semifield: a finite `f64` or `-inf`.
///
/// `NaN` and `+inf` are never representable; constructors reject them, so all
/// comparisons are total.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TropicalScalar(f64);

impl TropicalScalar {
    /// Wraps a raw value. Panics on `NaN` or `+inf`; use [`try_new`] on
    /// untrusted data.
    ///
    /// [`try_new`]: Self::try_new
    pub fn new(value: f64) -> Self {
        Self::try_new(value).expect("tropical scalar must be finite or -inf")
    }

    /// Checked constructor for untrusted values.
    pub fn try_new(value: f64) -> Result<Self, DomainError> {
        if value.is_nan() || value == f64::INFINITY {
            Err(DomainError::NotRepresentable(value))
        } else {
            Ok(Self(value))
        }
    }

    /// The additive zero `-inf`.
    pub const fn zero() -> Self {
        Self(f64::NEG_INFINITY)
    }

    /// The multiplicative identity `0`.
    pub const fn one() -> Self {
        Self(0.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// Tropical addition: maximum. Idempotent, with `-inf` as neutral element.
    pub fn oplus(self, rhs: Self) -> Self {
        Self(self.0.max(rhs.0))
    }

    /// Tropical multiplication: ordinary addition, with `-inf` absorbing.
    pub fn otimes(self, rhs: Self) -> Self {
        // -inf + -inf = -inf and -inf + finite = -inf in IEEE arithmetic;
        // +inf never occurs, so the sum is never NaN.
        Self(self.0 + rhs.0)
    }

    /// Multiplicative inverse `-x`; the zero has none.
    pub fn inverse(self) -> Result<Self, DomainError> {
        if self.is_zero() {
            Err(DomainError::ZeroInverse)
        } else {
            Ok(Self(-self.0))
        }
    }

    /// Rational power `x^(num/den)`, which in max-plus arithmetic is the
    /// conventional product `x * num/den`.
    ///
    /// For the zero: positive exponents give zero, the zeroth power is `1`
    /// by convention, and negative exponents are undefined.
    pub fn power(self, num: i64, den: u32) -> Result<Self, DomainError> {
        if den == 0 {
            return Err(DomainError::ZeroDenominator);
        }
        if self.is_zero() {
            return match num.cmp(&0) {
                Ordering::Greater => Ok(Self::zero()),
                Ordering::Equal => Ok(Self::one()),
                Ordering::Less => Err(DomainError::NegativePowerOfZero),
            };
        }
        Ok(Self((self.0 * num as f64) / den as f64))
    }

    /// `k`-th root, i.e. `power(1, k)`. Used for trace formulas.
    pub fn root(self, k: u32) -> Self {
        self.power(1, k).expect("k-th root requires k > 0")
    }
}

impl Eq for TropicalScalar {}

// NaN is unrepresentable, so the order is total.
impl Ord for TropicalScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.partial_cmp(&other.0).expect("tropical scalars are never NaN")
    }
}

impl PartialOrd for TropicalScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TropicalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "-inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl From<TropicalScalar> for f64 {
    fn from(s: TropicalScalar) -> f64 {
        s.0
    }
}
