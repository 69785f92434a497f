//! Taylor (`𝒯`, plain ℓ¹) and Chebyshev (`𝒞_ν`, weighted ℓ¹) coefficient
//! sequences with their Banach-algebra products.
//!
//! A Chebyshev sequence `w` represents `w_0 + 2 Σ_{n≥1} w_n T_n(s)` on
//! `[-1, 1]`, so its norm is `|w_0| + 2 Σ |w_n| ν^n` and the product is the
//! symmetric two-sided convolution.

use crate::error::RigorError;
use crate::interval::Interval;
use crate::scalar::Scalar;

/// Enclosures of the `𝒞_ν` weights `1, 2ν, 2ν², …` up to index `n`.
pub fn cheb_weights(nu: f64, n: usize) -> Vec<Interval> {
    let nu = Interval::point(nu);
    let mut out = Vec::with_capacity(n + 1);
    let mut p = Interval::ONE;
    out.push(Interval::ONE);
    for _ in 1..=n {
        p = p * nu;
        out.push(p * Interval::point(2.0));
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct TaylorSeq<T> {
    pub coeffs: Vec<T>,
}

impl<T: Scalar> TaylorSeq<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a sequence needs at least one coefficient");
        TaylorSeq { coeffs }
    }

    pub fn zeros(degree: usize) -> Self {
        TaylorSeq {
            coeffs: vec![T::zero(); degree + 1],
        }
    }

    pub fn constant(c: T) -> Self {
        TaylorSeq { coeffs: vec![c] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn get(&self, n: usize) -> T {
        self.coeffs.get(n).copied().unwrap_or_else(T::zero)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> TaylorSeq<U> {
        TaylorSeq {
            coeffs: self.coeffs.iter().map(|&c| f(c)).collect(),
        }
    }

    /// Same sequence stored with degree exactly `n` (zero-padded or cut).
    pub fn resized(&self, n: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n + 1, T::zero());
        TaylorSeq { coeffs }
    }

    pub fn cauchy_product(&self, other: &Self) -> Self {
        let (da, db) = (self.degree(), other.degree());
        let mut out = vec![T::zero(); da + db + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        TaylorSeq { coeffs: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        TaylorSeq {
            coeffs: (0..n).map(|k| self.get(k) + other.get(k)).collect(),
        }
    }

    pub fn scale(&self, c: T) -> Self {
        self.map(|a| a * c)
    }

    /// `Σ |a_n|`.
    pub fn norm(&self) -> Interval {
        self.coeffs.iter().map(|c| c.modulus()).sum()
    }

    /// Coefficients with index `≤ n`.
    pub fn truncate(&self, n: usize) -> Self {
        let mut coeffs: Vec<T> = self.coeffs.iter().take(n + 1).copied().collect();
        coeffs.resize(n + 1, T::zero());
        TaylorSeq { coeffs }
    }

    /// Coefficients with index `> n`, lower ones zeroed (same length).
    pub fn tail(&self, n: usize) -> Self {
        TaylorSeq {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| if k > n { c } else { T::zero() })
                .collect(),
        }
    }

    /// `Σ a_m r^m`.
    pub fn eval(&self, r: T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, &c| acc * r + c)
    }

    /// `Σ (m/ℓ) a_m r^{m-1}`, the derivative of `a(ρ/ℓ)` in ρ at ρ = ℓ r.
    pub fn eval_deriv_scaled(&self, r: T, ell: Interval) -> T {
        let deriv = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(T::zero(), |acc, (m, &c)| acc * r + c * T::from_f64(m as f64));
        deriv * T::from_interval(ell.recip().unwrap_or(Interval::ENTIRE))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChebSeq<T> {
    pub coeffs: Vec<T>,
    pub nu: f64,
}

impl<T: Scalar> ChebSeq<T> {
    pub fn new(coeffs: Vec<T>, nu: f64) -> Self {
        assert!(!coeffs.is_empty(), "a sequence needs at least one coefficient");
        assert!(nu >= 1.0, "nu must be at least 1");
        ChebSeq { coeffs, nu }
    }

    pub fn zeros(degree: usize, nu: f64) -> Self {
        ChebSeq::new(vec![T::zero(); degree + 1], nu)
    }

    pub fn constant(c: T, nu: f64) -> Self {
        ChebSeq::new(vec![c], nu)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn get(&self, n: usize) -> T {
        self.coeffs.get(n).copied().unwrap_or_else(T::zero)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> ChebSeq<U> {
        ChebSeq {
            coeffs: self.coeffs.iter().map(|&c| f(c)).collect(),
            nu: self.nu,
        }
    }

    pub fn resized(&self, n: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n + 1, T::zero());
        ChebSeq {
            coeffs,
            nu: self.nu,
        }
    }

    /// `{a * b}_n = Σ_{m ∈ Z} a_{|n-m|} b_{|m|}`.
    pub fn convolution(&self, other: &Self) -> Result<Self, RigorError> {
        if self.nu != other.nu {
            return Err(RigorError::NuMismatch(self.nu, other.nu));
        }
        Ok(self.conv_unchecked(other))
    }

    pub(crate) fn conv_unchecked(&self, other: &Self) -> Self {
        let (da, db) = (self.degree() as isize, other.degree() as isize);
        let a = &self.coeffs;
        let b = &other.coeffs;
        let mut out = vec![T::zero(); (da + db + 1) as usize];
        // two-sided convolution restricted to nonnegative output indices
        for (i, &ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            let i = i as isize;
            for (j, &bj) in b.iter().enumerate() {
                let j = j as isize;
                let p = ai * bj;
                out[(i + j) as usize] = out[(i + j) as usize] + p;
                if i > 0 && j > 0 {
                    // i - j and j - i: one of them lands on |i - j|, both on 0 when i == j
                    let n = (i - j).unsigned_abs();
                    out[n] = out[n] + p;
                    if i == j {
                        out[0] = out[0] + p;
                    }
                }
            }
        }
        ChebSeq {
            coeffs: out,
            nu: self.nu,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        ChebSeq {
            coeffs: (0..n).map(|k| self.get(k) + other.get(k)).collect(),
            nu: self.nu,
        }
    }

    pub fn scale(&self, c: T) -> Self {
        self.map(|a| a * c)
    }

    /// `|a_0| + 2 Σ_{n≥1} |a_n| ν^n`.
    pub fn norm(&self) -> Interval {
        let w = cheb_weights(self.nu, self.degree());
        self.coeffs
            .iter()
            .zip(w)
            .map(|(c, w)| c.modulus() * w)
            .sum()
    }

    pub fn truncate(&self, n: usize) -> Self {
        let mut coeffs: Vec<T> = self.coeffs.iter().take(n + 1).copied().collect();
        coeffs.resize(n + 1, T::zero());
        ChebSeq {
            coeffs,
            nu: self.nu,
        }
    }

    pub fn tail(&self, n: usize) -> Self {
        ChebSeq {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| if k > n { c } else { T::zero() })
                .collect(),
            nu: self.nu,
        }
    }

    /// Value at `s = 1`: `a_0 + 2 Σ a_n`.
    pub fn eval_at_one(&self) -> T {
        let two = T::from_f64(2.0);
        self.coeffs
            .iter()
            .skip(1)
            .fold(self.coeffs[0], |acc, &c| acc + two * c)
    }

    /// Value at `s = -1`: `a_0 + 2 Σ (-1)^n a_n`.
    pub fn eval_at_minus_one(&self) -> T {
        let two = T::from_f64(2.0);
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .fold(self.coeffs[0], |acc, (n, &c)| {
                if n % 2 == 0 {
                    acc + two * c
                } else {
                    acc - two * c
                }
            })
    }

    /// Clenshaw evaluation of `a_0 + 2 Σ a_n T_n(s)`.
    pub fn eval(&self, s: T) -> T {
        let two = T::from_f64(2.0);
        let n = self.degree();
        if n == 0 {
            return self.coeffs[0];
        }
        let mut b1 = T::zero();
        let mut b2 = T::zero();
        for k in (1..=n).rev() {
            let b0 = two * self.coeffs[k] + two * s * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        self.coeffs[0] + s * b1 - b2
    }
}

/// `max_i Σ_j |m_ij|_𝒯`: norm of a matrix of multiplication operators on `𝒯^q`.
pub fn taylor_grid_norm<T: Scalar>(grid: &[Vec<TaylorSeq<T>>]) -> Interval {
    grid.iter()
        .map(|row| row.iter().map(|s| s.norm()).sum::<Interval>())
        .fold(Interval::ZERO, Interval::max)
}

/// `max_i Σ_j |m_ij|_{𝒞_ν}` on `𝒞_ν^{n}`.
pub fn cheb_grid_norm<T: Scalar>(grid: &[Vec<ChebSeq<T>>]) -> Interval {
    grid.iter()
        .map(|row| row.iter().map(|s| s.norm()).sum::<Interval>())
        .fold(Interval::ZERO, Interval::max)
}
