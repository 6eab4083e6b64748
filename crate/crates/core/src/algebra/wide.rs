use std::ops::{Add, Mul, Neg, Sub};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use num_traits::ToPrimitive;

use super::{Field, Rational};

type Inner = FBig<HalfEven, 2>;

/// Binary mantissa bits carried by [`WideFloat`].
pub const WIDE_PRECISION: usize = 128;

/// Binary floating point with a 128-bit mantissa and an unbounded exponent.
///
/// Used for long orbits whose coordinates grow past the f64 exponent range;
/// rounding is to nearest-even at every operation.
#[derive(Clone, Debug, PartialEq)]
pub struct WideFloat(Inner);

impl WideFloat {
    fn from_inner(x: Inner) -> Self {
        WideFloat(x.with_precision(WIDE_PRECISION).value())
    }

    pub fn from_f64(x: f64) -> Self {
        WideFloat::from_inner(Inner::try_from(x).unwrap_or(Inner::ZERO))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    /// Scientific decimal with `digits` significant digits; unlike
    /// [`WideFloat::to_f64`] this never overflows to infinity.
    pub fn to_decimal(&self, digits: usize) -> String {
        let dec = self.0.clone().with_base_and_precision::<10>(digits).value();
        format!("{dec:e}")
    }

    pub fn abs(&self) -> Self {
        if self.0 < Inner::ZERO {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl Add for WideFloat {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        WideFloat(self.0 + rhs.0)
    }
}

impl Sub for WideFloat {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        WideFloat(self.0 - rhs.0)
    }
}

impl Mul for WideFloat {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        WideFloat(self.0 * rhs.0)
    }
}

impl Neg for WideFloat {
    type Output = Self;
    fn neg(self) -> Self {
        WideFloat(-self.0)
    }
}

impl Field for WideFloat {
    fn zero() -> Self {
        WideFloat::from_inner(Inner::ZERO)
    }
    fn one() -> Self {
        WideFloat::from_inner(Inner::ONE)
    }
    fn from_i64(n: i64) -> Self {
        WideFloat::from_inner(Inner::from(n))
    }
    fn from_rational(r: &Rational) -> Self {
        match (r.numerator().to_i64(), r.denominator().to_i64()) {
            (Some(n), Some(d)) => WideFloat::from_i64(n) * WideFloat::from_i64(d).recip(),
            _ => WideFloat::from_f64(r.to_f64()),
        }
    }
    fn is_zero(&self) -> bool {
        self.0 == Inner::ZERO
    }
    fn recip(&self) -> Self {
        WideFloat(Self::one().0 / self.0.clone())
    }
    fn approx(&self) -> f64 {
        self.to_f64()
    }
}
