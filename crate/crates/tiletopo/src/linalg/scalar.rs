use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact-rational backend; golden values and equality-sensitive
/// comparisons run on this type.
pub type Rational = num_rational::BigRational;

/// The numeric backend abstraction: 64-bit floats for bulk point clouds,
/// arbitrary-precision rationals for oracles and exact trichotomies.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True when arithmetic is exact (no rounding); drives the
    /// equality-versus-band logic in the classifiers.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    /// `num / den` as an exact value of the backend. `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;
    fn abs(&self) -> Self;
    fn to_f64(&self) -> f64;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }
    /// Componentwise sign in {-1, 0, 1}.
    fn signum_int(&self) -> i64 {
        if self.is_zero() {
            0
        } else if self.is_negative() {
            -1
        } else {
            1
        }
    }
    /// `self^n` for `n >= 0` by repeated multiplication.
    fn powu(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        num as f64 / den as f64
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        <Rational as Zero>::zero()
    }
    fn one() -> Self {
        <Rational as One>::one()
    }
    fn from_int(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational::new(BigInt::from(num), BigInt::from(den))
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_ratio_is_exact() {
        let third = Rational::from_ratio(1, 3);
        let one = third.clone() + third.clone() + third;
        assert_eq!(one, <Rational as Scalar>::one());
    }

    #[test]
    fn float_backend_round_trips_ints() {
        assert_eq!(f64::from_ratio(-7, 2), -3.5);
        assert_eq!(Scalar::to_f64(&f64::from_int(41)), 41.0);
        assert_eq!((-2.0f64).signum_int(), -1);
        assert_eq!(0.0f64.signum_int(), 0);
    }

    #[test]
    fn powu_matches_repeated_multiplication() {
        assert_eq!(Rational::from_int(3).powu(5), Rational::from_int(243));
        assert_eq!(2.0f64.powu(10), 1024.0);
    }
}
