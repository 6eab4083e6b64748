use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use super::Rational;

/// A field of characteristic zero that map formulas can be evaluated over.
///
/// Division is deliberately absent from the operator set: every map checks
/// its guard denominators with [`Field::is_zero`] and then multiplies by
/// [`Field::recip`], so a vanishing denominator is reported by name instead
/// of surfacing as a panic or a NaN.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;

    /// Exact zero test for exact fields; `== 0.0` for floats.
    fn is_zero(&self) -> bool;

    /// Multiplicative inverse. Callers must have ruled out zero.
    fn recip(&self) -> Self;

    /// Best-effort float approximation, used for near-singularity thresholds
    /// and reporting.
    fn approx(&self) -> f64;

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn from_i64(n: i64) -> Self {
        Rational::from_integer(n)
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn recip(&self) -> Self {
        Rational::recip(self).expect("recip of zero; guard not checked")
    }
    fn approx(&self) -> f64 {
        self.to_f64()
    }
}

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_rational(r: &Rational) -> Self {
        r.to_f64()
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn recip(&self) -> Self {
        1.0 / self
    }
    fn approx(&self) -> f64 {
        *self
    }
}
