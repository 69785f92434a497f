use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::interval::{cabs_up, sqrt_down, CInterval, Interval};

/// Coefficient field shared by the floating-point (numerical) and interval
/// (certified) code paths.
pub trait Scalar:
    Copy
    + Send
    + Sync
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    /// Interval types keep the enclosure; float types take the midpoint.
    fn from_interval(x: Interval) -> Self;
    fn from_f64(x: f64) -> Self {
        Self::from_interval(Interval::point(x))
    }
    /// Enclosure of the modulus.
    fn modulus(self) -> Interval;
    fn is_zero(self) -> bool {
        self == Self::zero()
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_interval(x: Interval) -> Self {
        x.mid()
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn modulus(self) -> Interval {
        Interval::point(self.abs())
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_interval(x: Interval) -> Self {
        Complex64::new(x.mid(), 0.0)
    }
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn modulus(self) -> Interval {
        if self.im == 0.0 {
            return Interval::point(self.re.abs());
        }
        if self.re == 0.0 {
            return Interval::point(self.im.abs());
        }
        let lo = sqrt_down(
            crate::interval::add_down(
                crate::interval::mul_down(self.re, self.re),
                crate::interval::mul_down(self.im, self.im),
            ),
        );
        Interval::new(lo, cabs_up(self))
    }
}

impl Scalar for Interval {
    fn zero() -> Self {
        Interval::ZERO
    }
    fn one() -> Self {
        Interval::ONE
    }
    fn from_interval(x: Interval) -> Self {
        x
    }
    fn modulus(self) -> Interval {
        self.abs()
    }
}

impl Scalar for CInterval {
    fn zero() -> Self {
        CInterval::ZERO
    }
    fn one() -> Self {
        CInterval::ONE
    }
    fn from_interval(x: Interval) -> Self {
        CInterval::real(x)
    }
    fn modulus(self) -> Interval {
        CInterval::modulus(self)
    }
}
