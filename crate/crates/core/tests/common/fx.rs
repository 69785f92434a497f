//! Binary fixed point with 200 fractional bits on top of `BigInt`. Every
//! operation is off by at most a few units of 2^-200, which is far below
//! anything the comparisons in these tests can see.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub const BITS: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fx(pub BigInt);

impl Fx {
    pub fn zero() -> Fx {
        Fx(BigInt::zero())
    }

    pub fn int(n: i64) -> Fx {
        Fx(BigInt::from(n) << BITS)
    }

    /// Exact for every finite double above 2^-200 in magnitude.
    pub fn from_f64(x: f64) -> Fx {
        assert!(x.is_finite());
        Fx::from_rational(&BigRational::from_float(x).unwrap())
    }

    pub fn from_rational(q: &BigRational) -> Fx {
        Fx((q.numer() << BITS) / q.denom())
    }

    pub fn to_f64(&self) -> f64 {
        let q = BigRational::new(self.0.clone(), BigInt::from(1) << BITS);
        q.to_f64().unwrap()
    }

    pub fn abs(&self) -> Fx {
        Fx(self.0.abs())
    }

    pub fn div(&self, b: &Fx) -> Fx {
        Fx((&self.0 << BITS) / &b.0)
    }

    pub fn mul_int(&self, n: i64) -> Fx {
        Fx(&self.0 * n)
    }

    pub fn div_int(&self, n: i64) -> Fx {
        Fx(&self.0 / n)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl Add for &Fx {
    type Output = Fx;
    fn add(self, b: &Fx) -> Fx {
        Fx(&self.0 + &b.0)
    }
}

impl Sub for &Fx {
    type Output = Fx;
    fn sub(self, b: &Fx) -> Fx {
        Fx(&self.0 - &b.0)
    }
}

impl Mul for &Fx {
    type Output = Fx;
    fn mul(self, b: &Fx) -> Fx {
        Fx((&self.0 * &b.0) >> BITS)
    }
}

impl Neg for &Fx {
    type Output = Fx;
    fn neg(self) -> Fx {
        Fx(-&self.0)
    }
}

/// Compares a fixed-point value with a double, exactly.
pub fn cmp_f64(a: &Fx, x: f64) -> Ordering {
    let lhs = BigRational::new(a.0.clone(), BigInt::from(1) << BITS);
    lhs.cmp(&BigRational::from_float(x).unwrap())
}

fn atan_inv(k: i64) -> Fx {
    // Σ (-1)^i / ((2i+1) k^(2i+1))
    let mut pow = Fx::int(1).div_int(k);
    let k2 = k * k;
    let mut sum = Fx::zero();
    let mut i = 0i64;
    while !pow.is_zero() {
        let term = pow.div_int(2 * i + 1);
        sum = if i % 2 == 0 { &sum + &term } else { &sum - &term };
        pow = pow.div_int(k2);
        i += 1;
    }
    sum
}

pub fn pi() -> Fx {
    &atan_inv(5).mul_int(16) - &atan_inv(239).mul_int(4)
}

pub fn exp(x: &Fx) -> Fx {
    const HALVINGS: usize = 16;
    let y = Fx(&x.0 >> HALVINGS);
    let mut term = Fx::int(1);
    let mut sum = Fx::int(1);
    let mut i = 1i64;
    while !term.is_zero() {
        term = (&term * &y).div_int(i);
        sum = &sum + &term;
        i += 1;
    }
    for _ in 0..HALVINGS {
        sum = &sum * &sum;
    }
    sum
}

/// Cosine for `|x| ≤ 4`.
pub fn cos(x: &Fx) -> Fx {
    let x2 = x * x;
    let mut term = Fx::int(1);
    let mut sum = Fx::int(1);
    let mut i = 1i64;
    while !term.is_zero() {
        term = -&(&term * &x2).div_int((2 * i - 1) * (2 * i));
        sum = &sum + &term;
        i += 1;
    }
    sum
}

/// Coefficients `w_k`, `k < m`, of the degree `m - 1` interpolant of `g` at
/// the Chebyshev-Gauss nodes, in the `w_0 + 2 Σ w_k T_k` convention.
pub fn cheb_coeffs(g: impl Fn(&Fx) -> Fx, m: usize) -> Vec<Fx> {
    let p = pi();
    let mut out = vec![Fx::zero(); m];
    for j in 0..m {
        let theta = p.mul_int(2 * j as i64 + 1).div_int(2 * m as i64);
        let x = cos(&theta);
        let gx = g(&x);
        let mut t_prev = Fx::int(1);
        let mut t = x.clone();
        out[0] = &out[0] + &gx;
        for o in out.iter_mut().skip(1) {
            *o = &*o + &(&gx * &t);
            let next = &(&t * &x).mul_int(2) - &t_prev;
            t_prev = std::mem::replace(&mut t, next);
        }
    }
    out.into_iter().map(|c| c.div_int(m as i64)).collect()
}
