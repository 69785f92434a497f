//! Real and complex interval arithmetic with outward rounding.
//!
//! Every operation computes the round-to-nearest result and then recovers the
//! sign of the rounding error exactly (TwoSum for additions, a fused
//! multiply-add residual for products, quotients and square roots). The
//! endpoint is moved by one ulp only when the error points the wrong way, so
//! exactly representable results stay thin. Near the underflow threshold the
//! residuals stop being exact and we fall back to unconditional widening.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::RigorError;

/// Below this magnitude FMA residuals may be inexact.
const TINY: f64 = 1.0e-290;

fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

pub(crate) fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        if s.is_nan() {
            return f64::NEG_INFINITY;
        }
        if a.is_finite() && b.is_finite() && s == f64::INFINITY {
            return f64::MAX;
        }
        return s;
    }
    if two_sum_err(a, b, s) < 0.0 {
        s.next_down()
    } else {
        s
    }
}

pub(crate) fn add_up(a: f64, b: f64) -> f64 {
    -add_down(-a, -b)
}

pub(crate) fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

pub(crate) fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

pub(crate) fn mul_down(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    if !p.is_finite() {
        if p.is_nan() {
            return f64::NEG_INFINITY;
        }
        if a.is_finite() && b.is_finite() && p == f64::INFINITY {
            return f64::MAX;
        }
        return p;
    }
    if p.abs() < TINY {
        return p.next_down();
    }
    if a.mul_add(b, -p) < 0.0 {
        p.next_down()
    } else {
        p
    }
}

pub(crate) fn mul_up(a: f64, b: f64) -> f64 {
    -mul_down(-a, b)
}

pub(crate) fn div_down(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let r = a / b;
    if !r.is_finite() {
        if r.is_nan() {
            return f64::NEG_INFINITY;
        }
        if a.is_finite() && b != 0.0 && r == f64::INFINITY {
            return f64::MAX;
        }
        return r;
    }
    if r.abs() < TINY || a.abs() < TINY || b.is_infinite() {
        return r.next_down();
    }
    // a - r*b is exact; the true quotient lies below r iff (a - r b)/b < 0
    let rem = (-r).mul_add(b, a);
    if (rem < 0.0) != (b < 0.0) && rem != 0.0 {
        r.next_down()
    } else {
        r
    }
}

pub(crate) fn div_up(a: f64, b: f64) -> f64 {
    -div_down(-a, b)
}

pub(crate) fn sqrt_down(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let r = x.sqrt();
    if !r.is_finite() {
        return f64::MAX;
    }
    if x < TINY {
        return r.next_down().max(0.0);
    }
    if (-r).mul_add(r, x) < 0.0 {
        r.next_down()
    } else {
        r
    }
}

pub(crate) fn sqrt_up(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let r = x.sqrt();
    if !r.is_finite() {
        return r;
    }
    if x < TINY {
        return r.next_up();
    }
    if (-r).mul_add(r, x) > 0.0 {
        r.next_up()
    } else {
        r
    }
}

/// Closed real interval `[lo, hi]`.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };
    pub const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Interval {
        assert!(lo <= hi, "invalid interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Interval {
        assert!(!x.is_nan(), "NaN point interval");
        Interval { lo: x, hi: x }
    }

    /// Hull of two reals given in any order.
    pub fn hull_of(a: f64, b: f64) -> Interval {
        Interval::new(a.min(b), a.max(b))
    }

    /// `[x - r, x + r]` rounded outward.
    pub fn ball(x: f64, r: f64) -> Interval {
        let r = r.abs();
        Interval::new(sub_down(x, r), add_up(x, r))
    }

    /// Enclosure of the rational `num / den`.
    pub fn ratio(num: i64, den: i64) -> Interval {
        Interval::from_int(num) / Interval::from_int(den)
    }

    /// Enclosure of an integer (exact below 2^53).
    pub fn from_int(n: i64) -> Interval {
        let x = n as f64;
        if x as i64 == n && x.abs() < 9.0e15 {
            Interval::point(x)
        } else {
            Interval::new(x.next_down(), x.next_up())
        }
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn mid(self) -> f64 {
        if self.lo == self.hi {
            return self.lo;
        }
        if self.lo.is_infinite() || self.hi.is_infinite() {
            if self.lo.is_infinite() && self.hi.is_infinite() {
                return 0.0;
            }
            return if self.lo.is_infinite() { self.hi } else { self.lo };
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    /// Upper bound of the radius around `mid()`.
    pub fn rad(self) -> f64 {
        let m = self.mid();
        sub_up(self.hi, m).max(sub_up(m, self.lo))
    }

    pub fn width(self) -> f64 {
        sub_up(self.hi, self.lo)
    }

    /// Largest absolute value in the interval.
    pub fn mag(self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value in the interval.
    pub fn mig(self) -> f64 {
        if self.lo <= 0.0 && self.hi >= 0.0 {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn is_finite(self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(self) -> bool {
        self.contains(0.0)
    }

    pub fn subset_of(self, other: Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn hull(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn overlaps(self, other: Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Enclosure of `{|x| : x in self}`.
    pub fn abs(self) -> Interval {
        Interval {
            lo: self.mig(),
            hi: self.mag(),
        }
    }

    pub fn sqr(self) -> Interval {
        let a = self.abs();
        Interval {
            lo: mul_down(a.lo, a.lo),
            hi: mul_up(a.hi, a.hi),
        }
    }

    /// Square root; negative parts are clipped to zero.
    pub fn sqrt(self) -> Result<Interval, RigorError> {
        if self.hi < 0.0 {
            return Err(RigorError::Domain("sqrt of a negative interval"));
        }
        Ok(Interval {
            lo: sqrt_down(self.lo.max(0.0)),
            hi: sqrt_up(self.hi),
        })
    }

    pub fn powi(self, n: u32) -> Interval {
        match n {
            0 => Interval::ONE,
            1 => self,
            _ => {
                let sq = self.powi(n / 2).sqr();
                if n % 2 == 1 {
                    sq * self
                } else {
                    sq
                }
            }
        }
    }

    pub fn recip(self) -> Result<Interval, RigorError> {
        Interval::ONE.try_div(self)
    }

    pub fn try_div(self, b: Interval) -> Result<Interval, RigorError> {
        if b.contains_zero() {
            return Err(RigorError::DivisionByZeroInterval);
        }
        let cands_lo = [
            div_down(self.lo, b.lo),
            div_down(self.lo, b.hi),
            div_down(self.hi, b.lo),
            div_down(self.hi, b.hi),
        ];
        let cands_hi = [
            div_up(self.lo, b.lo),
            div_up(self.lo, b.hi),
            div_up(self.hi, b.lo),
            div_up(self.hi, b.hi),
        ];
        Ok(Interval {
            lo: cands_lo.iter().cloned().fold(f64::INFINITY, f64::min),
            hi: cands_hi.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        })
    }

    pub fn max(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.max(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn min(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.min(other.hi),
        }
    }

    /// Interval `[0, hi]` used for one-sided norm bounds.
    pub fn upper_bound(hi: f64) -> Interval {
        Interval::new(0.0f64.min(hi), hi)
    }

    /// `true` when every element is strictly below every element of `other`.
    pub fn certainly_lt(self, other: Interval) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_le(self, other: Interval) -> bool {
        self.hi <= other.lo
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Default for Interval {
    fn default() -> Self {
        Interval::ZERO
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, b: Interval) -> Interval {
        Interval {
            lo: add_down(self.lo, b.lo),
            hi: add_up(self.hi, b.hi),
        }
    }
}

impl AddAssign for Interval {
    fn add_assign(&mut self, b: Interval) {
        *self = *self + b;
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, b: Interval) -> Interval {
        Interval {
            lo: sub_down(self.lo, b.hi),
            hi: sub_up(self.hi, b.lo),
        }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, b: Interval) -> Interval {
        let (a0, a1, b0, b1) = (self.lo, self.hi, b.lo, b.hi);
        if a0 >= 0.0 && b0 >= 0.0 {
            return Interval {
                lo: mul_down(a0, b0),
                hi: mul_up(a1, b1),
            };
        }
        if a0 == a1 && b0 == b1 {
            return Interval {
                lo: mul_down(a0, b0),
                hi: mul_up(a0, b0),
            };
        }
        let lo = mul_down(a0, b0)
            .min(mul_down(a0, b1))
            .min(mul_down(a1, b0))
            .min(mul_down(a1, b1));
        let hi = mul_up(a0, b0)
            .max(mul_up(a0, b1))
            .max(mul_up(a1, b0))
            .max(mul_up(a1, b1));
        Interval { lo, hi }
    }
}

/// Division by an interval containing zero yields `ENTIRE`; use
/// [`Interval::try_div`] to get an error instead.
impl Div for Interval {
    type Output = Interval;
    fn div(self, b: Interval) -> Interval {
        self.try_div(b).unwrap_or(Interval::ENTIRE)
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    fn mul(self, b: f64) -> Interval {
        self * Interval::point(b)
    }
}

impl Add<f64> for Interval {
    type Output = Interval;
    fn add(self, b: f64) -> Interval {
        self + Interval::point(b)
    }
}

impl std::iter::Sum for Interval {
    fn sum<I: Iterator<Item = Interval>>(iter: I) -> Interval {
        iter.fold(Interval::ZERO, |a, b| a + b)
    }
}

/// Rectangular complex interval.
#[derive(Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct CInterval {
    pub re: Interval,
    pub im: Interval,
}

impl CInterval {
    pub const ZERO: CInterval = CInterval {
        re: Interval::ZERO,
        im: Interval::ZERO,
    };
    pub const ONE: CInterval = CInterval {
        re: Interval::ONE,
        im: Interval::ZERO,
    };

    pub fn new(re: Interval, im: Interval) -> CInterval {
        CInterval { re, im }
    }

    pub fn real(re: Interval) -> CInterval {
        CInterval {
            re,
            im: Interval::ZERO,
        }
    }

    pub fn point(z: Complex64) -> CInterval {
        CInterval {
            re: Interval::point(z.re),
            im: Interval::point(z.im),
        }
    }

    /// Box containing the closed disc of radius `r` around `z`.
    pub fn ball(z: Complex64, r: f64) -> CInterval {
        CInterval {
            re: Interval::ball(z.re, r),
            im: Interval::ball(z.im, r),
        }
    }

    pub fn mid(self) -> Complex64 {
        Complex64::new(self.re.mid(), self.im.mid())
    }

    /// Upper bound of the distance from `mid()` to any point of the box.
    pub fn rad(self) -> f64 {
        hypot_up(self.re.rad(), self.im.rad())
    }

    pub fn conj(self) -> CInterval {
        CInterval {
            re: self.re,
            im: -self.im,
        }
    }

    /// Enclosure of `{|z|}` over the box.
    pub fn modulus(self) -> Interval {
        let lo2 = add_down(
            mul_down(self.re.mig(), self.re.mig()),
            mul_down(self.im.mig(), self.im.mig()),
        );
        let hi2 = add_up(
            mul_up(self.re.mag(), self.re.mag()),
            mul_up(self.im.mag(), self.im.mag()),
        );
        Interval::new(sqrt_down(lo2), sqrt_up(hi2))
    }

    /// Upper bound of `|z|` over the box.
    pub fn mag(self) -> f64 {
        self.modulus().hi()
    }

    pub fn contains(self, z: Complex64) -> bool {
        self.re.contains(z.re) && self.im.contains(z.im)
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn hull(self, other: CInterval) -> CInterval {
        CInterval {
            re: self.re.hull(other.re),
            im: self.im.hull(other.im),
        }
    }

    pub fn scale(self, s: Interval) -> CInterval {
        CInterval {
            re: self.re * s,
            im: self.im * s,
        }
    }

    pub fn sqr(self) -> CInterval {
        CInterval {
            re: self.re.sqr() - self.im.sqr(),
            im: (self.re * self.im) * Interval::point(2.0),
        }
    }

    pub fn recip(self) -> Result<CInterval, RigorError> {
        let den = self.re.sqr() + self.im.sqr();
        Ok(CInterval {
            re: self.re.try_div(den)?,
            im: (-self.im).try_div(den)?,
        })
    }

    pub fn try_div(self, b: CInterval) -> Result<CInterval, RigorError> {
        Ok(self * b.recip()?)
    }
}

impl fmt::Debug for CInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + i{:?})", self.re, self.im)
    }
}

impl From<Interval> for CInterval {
    fn from(x: Interval) -> Self {
        CInterval::real(x)
    }
}

impl Add for CInterval {
    type Output = CInterval;
    fn add(self, b: CInterval) -> CInterval {
        CInterval {
            re: self.re + b.re,
            im: self.im + b.im,
        }
    }
}

impl AddAssign for CInterval {
    fn add_assign(&mut self, b: CInterval) {
        *self = *self + b;
    }
}

impl Sub for CInterval {
    type Output = CInterval;
    fn sub(self, b: CInterval) -> CInterval {
        CInterval {
            re: self.re - b.re,
            im: self.im - b.im,
        }
    }
}

impl Neg for CInterval {
    type Output = CInterval;
    fn neg(self) -> CInterval {
        CInterval {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Mul for CInterval {
    type Output = CInterval;
    fn mul(self, b: CInterval) -> CInterval {
        if self.im == Interval::ZERO && b.im == Interval::ZERO {
            return CInterval::real(self.re * b.re);
        }
        CInterval {
            re: self.re * b.re - self.im * b.im,
            im: self.re * b.im + self.im * b.re,
        }
    }
}

impl Div for CInterval {
    type Output = CInterval;
    fn div(self, b: CInterval) -> CInterval {
        self.try_div(b).unwrap_or(CInterval {
            re: Interval::ENTIRE,
            im: Interval::ENTIRE,
        })
    }
}

/// Upper bound of `sqrt(x^2 + y^2)`.
pub fn hypot_up(x: f64, y: f64) -> f64 {
    let (x, y) = (x.abs(), y.abs());
    if y == 0.0 {
        return x;
    }
    if x == 0.0 {
        return y;
    }
    sqrt_up(add_up(mul_up(x, x), mul_up(y, y)))
}

/// Upper bound of `|z|` for a point complex number.
pub fn cabs_up(z: Complex64) -> f64 {
    hypot_up(z.re, z.im)
}

/// Accumulator for sums of nonnegative floats with a deferred upward
/// correction: returns a value that bounds the exact sum of the inputs
/// (each input is assumed to be an upper bound computed with at most one
/// round-to-nearest error relative to the quantity it represents).
#[derive(Clone, Copy, Debug, Default)]
pub struct UpSum {
    sum: f64,
    count: usize,
}

pub const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// Relative inflation factor covering `n` accumulated roundings.
pub fn gamma_factor(n: usize) -> f64 {
    let nu = (n as f64 + 2.0) * UNIT_ROUNDOFF;
    assert!(nu < 0.25, "accumulation too long for the rounding model");
    // 1/(1 - nu) <= 1 + 2 nu for nu < 1/2
    add_up(1.0, mul_up(2.0, nu))
}

impl UpSum {
    pub fn new() -> UpSum {
        UpSum::default()
    }

    pub fn add(&mut self, x: f64) {
        debug_assert!(x >= 0.0 || x.is_nan());
        self.sum += x;
        self.count += 1;
    }

    pub fn finish(self) -> f64 {
        if self.count == 0 {
            return 0.0;
        }
        add_up(
            mul_up(self.sum, gamma_factor(self.count)).next_up(),
            f64::MIN_POSITIVE * self.count as f64,
        )
    }
}

/// Serialized as `["lo", "hi"]`: shortest decimal strings that parse back to
/// the exact binary endpoints.
impl serde::Serialize for Interval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeTuple;
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&endpoint_string(self.lo))?;
        t.serialize_element(&endpoint_string(self.hi))?;
        t.end()
    }
}

impl<'de> serde::Deserialize<'de> for Interval {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [lo, hi]: [String; 2] = serde::Deserialize::deserialize(d)?;
        let parse = |x: &str| x.parse::<f64>().map_err(serde::de::Error::custom);
        let (lo, hi) = (parse(&lo)?, parse(&hi)?);
        if !(lo <= hi) {
            return Err(serde::de::Error::custom("interval endpoints out of order"));
        }
        Ok(Interval { lo, hi })
    }
}

fn endpoint_string(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:e}")
    }
}
