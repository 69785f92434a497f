//! Polynomial maps `C^n → C^m` stored as monomial lists, evaluated over any
//! commutative carrier algebra (scalars, Taylor sequences, Chebyshev
//! sequences).

use crate::error::RigorError;
use crate::interval::Interval;
use crate::scalar::Scalar;
use crate::seq::{ChebSeq, TaylorSeq};

/// Commutative algebra a polynomial can be evaluated over.
pub trait Carrier: Clone {
    type S: Scalar;
    fn zero_like(&self) -> Self;
    fn constant_like(&self, c: Self::S) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: Self::S) -> Self;
}

impl<T: Scalar> Carrier for T {
    type S = T;
    fn zero_like(&self) -> Self {
        T::zero()
    }
    fn constant_like(&self, c: T) -> Self {
        c
    }
    fn add(&self, other: &Self) -> Self {
        *self + *other
    }
    fn mul(&self, other: &Self) -> Self {
        *self * *other
    }
    fn scale(&self, c: T) -> Self {
        *self * c
    }
}

impl<T: Scalar> Carrier for TaylorSeq<T> {
    type S = T;
    fn zero_like(&self) -> Self {
        TaylorSeq::zeros(0)
    }
    fn constant_like(&self, c: T) -> Self {
        TaylorSeq::constant(c)
    }
    fn add(&self, other: &Self) -> Self {
        TaylorSeq::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        self.cauchy_product(other)
    }
    fn scale(&self, c: T) -> Self {
        TaylorSeq::scale(self, c)
    }
}

impl<T: Scalar> Carrier for ChebSeq<T> {
    type S = T;
    fn zero_like(&self) -> Self {
        ChebSeq::zeros(0, self.nu)
    }
    fn constant_like(&self, c: T) -> Self {
        ChebSeq::constant(c, self.nu)
    }
    fn add(&self, other: &Self) -> Self {
        ChebSeq::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nu, other.nu, "mixed nu in one polynomial evaluation");
        self.conv_unchecked(other)
    }
    fn scale(&self, c: T) -> Self {
        ChebSeq::scale(self, c)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub target: usize,
    pub powers: Vec<u32>,
    pub coeff: Interval,
}

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.powers.iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialMap {
    n_in: usize,
    n_out: usize,
    monomials: Vec<Monomial>,
}

impl PolynomialMap {
    pub fn new(n_in: usize, n_out: usize, monomials: Vec<Monomial>) -> Result<Self, RigorError> {
        for m in &monomials {
            if m.powers.len() != n_in {
                return Err(RigorError::ArityMismatch {
                    expected: n_in,
                    got: m.powers.len(),
                });
            }
            if m.target >= n_out {
                return Err(RigorError::ArityMismatch {
                    expected: n_out,
                    got: m.target + 1,
                });
            }
        }
        let mut p = PolynomialMap {
            n_in,
            n_out,
            monomials: Vec::new(),
        };
        for m in monomials {
            p.push(m);
        }
        Ok(p)
    }

    pub fn zero(n_in: usize, n_out: usize) -> Self {
        PolynomialMap {
            n_in,
            n_out,
            monomials: Vec::new(),
        }
    }

    /// Adds a monomial, merging it with an existing one of the same shape.
    fn push(&mut self, m: Monomial) {
        if m.coeff == Interval::ZERO {
            return;
        }
        if let Some(e) = self
            .monomials
            .iter_mut()
            .find(|e| e.target == m.target && e.powers == m.powers)
        {
            e.coeff += m.coeff;
        } else {
            self.monomials.push(m);
        }
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    /// Total degree `K`.
    pub fn degree(&self) -> u32 {
        self.monomials.iter().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Component `i` is identically zero.
    pub fn row_is_zero(&self, i: usize) -> bool {
        !self.monomials.iter().any(|m| m.target == i)
    }

    /// `∂p/∂x_j`.
    pub fn derivative(&self, j: usize) -> PolynomialMap {
        let mut out = PolynomialMap::zero(self.n_in, self.n_out);
        for m in &self.monomials {
            let k = m.powers[j];
            if k == 0 {
                continue;
            }
            let mut powers = m.powers.clone();
            powers[j] = k - 1;
            out.push(Monomial {
                target: m.target,
                powers,
                coeff: m.coeff * Interval::from_int(k as i64),
            });
        }
        out
    }

    /// Same monomials with coefficients replaced by their moduli.
    pub fn absolutify(&self) -> PolynomialMap {
        PolynomialMap {
            n_in: self.n_in,
            n_out: self.n_out,
            monomials: self
                .monomials
                .iter()
                .map(|m| Monomial {
                    target: m.target,
                    powers: m.powers.clone(),
                    coeff: m.coeff.abs(),
                })
                .collect(),
        }
    }

    /// Expansion of `ζ ↦ p(c + ζ)` in powers of `ζ`.
    pub fn shift(&self, c: &[Interval]) -> Result<PolynomialMap, RigorError> {
        if c.len() != self.n_in {
            return Err(RigorError::ArityMismatch {
                expected: self.n_in,
                got: c.len(),
            });
        }
        let mut out = PolynomialMap::zero(self.n_in, self.n_out);
        for m in &self.monomials {
            // iterate over all exponent vectors 0 <= i_j <= k_j
            let mut idx = vec![0u32; self.n_in];
            loop {
                let mut coeff = m.coeff;
                for j in 0..self.n_in {
                    let k = m.powers[j];
                    let i = idx[j];
                    coeff = coeff * Interval::from_int(binomial(k, i)) * c[j].powi(k - i);
                }
                out.push(Monomial {
                    target: m.target,
                    powers: idx.clone(),
                    coeff,
                });
                let mut j = 0;
                loop {
                    if j == self.n_in {
                        break;
                    }
                    if idx[j] < m.powers[j] {
                        idx[j] += 1;
                        break;
                    }
                    idx[j] = 0;
                    j += 1;
                }
                if j == self.n_in {
                    break;
                }
            }
        }
        Ok(out)
    }

    pub fn eval<C: Carrier>(&self, x: &[C]) -> Result<Vec<C>, RigorError> {
        if x.len() != self.n_in {
            return Err(RigorError::ArityMismatch {
                expected: self.n_in,
                got: x.len(),
            });
        }
        let like = &x[0];
        let mut max_pow = vec![0u32; self.n_in];
        for m in &self.monomials {
            for (j, &k) in m.powers.iter().enumerate() {
                max_pow[j] = max_pow[j].max(k);
            }
        }
        // pows[j][k - 1] = x_j^k
        let pows: Vec<Vec<C>> = (0..self.n_in)
            .map(|j| {
                let mut v: Vec<C> = Vec::with_capacity(max_pow[j] as usize);
                for k in 0..max_pow[j] as usize {
                    if k == 0 {
                        v.push(x[j].clone());
                    } else {
                        let next = v[k - 1].mul(&x[j]);
                        v.push(next);
                    }
                }
                v
            })
            .collect();
        let mut out: Vec<C> = (0..self.n_out).map(|_| like.zero_like()).collect();
        for m in &self.monomials {
            let c = C::S::from_interval(m.coeff);
            let mut term: Option<C> = None;
            for (j, &k) in m.powers.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let f = &pows[j][k as usize - 1];
                term = Some(match term {
                    None => f.clone(),
                    Some(t) => t.mul(f),
                });
            }
            let term = match term {
                None => like.constant_like(c),
                Some(t) => t.scale(c),
            };
            out[m.target] = out[m.target].add(&term);
        }
        Ok(out)
    }
}

fn binomial(n: u32, k: u32) -> i64 {
    let mut r: i64 = 1;
    for i in 0..k as i64 {
        r = r * (n as i64 - i) / (i + 1);
    }
    r
}

/// A polynomial map together with its symbolic first and second
/// derivatives, computed once.
#[derive(Clone, Debug)]
pub struct DiffPoly {
    pub map: PolynomialMap,
    pub d1: Vec<PolynomialMap>,
    pub d2: Vec<Vec<PolynomialMap>>,
}

impl DiffPoly {
    pub fn new(map: PolynomialMap) -> Self {
        let d1: Vec<PolynomialMap> = (0..map.n_in()).map(|j| map.derivative(j)).collect();
        let d2 = d1
            .iter()
            .map(|dj| (0..map.n_in()).map(|k| dj.derivative(k)).collect())
            .collect();
        DiffPoly { map, d1, d2 }
    }

    pub fn eval<C: Carrier>(&self, x: &[C]) -> Result<Vec<C>, RigorError> {
        self.map.eval(x)
    }

    /// Grid `J[i][j] = ∂p_i/∂x_j (x)`; identically-zero entries are `None`.
    pub fn jacobian<C: Carrier>(&self, x: &[C]) -> Result<Vec<Vec<Option<C>>>, RigorError> {
        let n_out = self.map.n_out();
        let mut grid: Vec<Vec<Option<C>>> = vec![vec![None; self.map.n_in()]; n_out];
        for (j, dj) in self.d1.iter().enumerate() {
            if dj.is_zero() {
                continue;
            }
            let vals = dj.eval(x)?;
            for (i, v) in vals.into_iter().enumerate() {
                if !dj.row_is_zero(i) {
                    grid[i][j] = Some(v);
                }
            }
        }
        Ok(grid)
    }

    /// `D²p(x)(y, z) = Σ_{j,k} ∂²p/∂x_j∂x_k (x) y_j z_k`.
    pub fn hessian_apply<C: Carrier>(&self, x: &[C], y: &[C], z: &[C]) -> Result<Vec<C>, RigorError> {
        let n = self.map.n_in();
        if y.len() != n || z.len() != n {
            return Err(RigorError::ArityMismatch {
                expected: n,
                got: y.len().min(z.len()),
            });
        }
        let mut out: Vec<C> = (0..self.map.n_out()).map(|_| x[0].zero_like()).collect();
        for j in 0..n {
            for k in 0..n {
                let djk = &self.d2[j][k];
                if djk.is_zero() {
                    continue;
                }
                let vals = djk.eval(x)?;
                let yz = y[j].mul(&z[k]);
                for (i, v) in vals.iter().enumerate() {
                    out[i] = out[i].add(&v.mul(&yz));
                }
            }
        }
        Ok(out)
    }

    /// `max_i Σ_{j,k} ∂²p_abs,i/∂ζ_j∂ζ_k` at the nonnegative point `radii`:
    /// a bound for the bilinear norm of `D²p` on a ball of those radii.
    pub fn d2_abs_norm(&self, radii: &[Interval]) -> Result<Interval, RigorError> {
        let n = self.map.n_in();
        if radii.len() != n {
            return Err(RigorError::ArityMismatch {
                expected: n,
                got: radii.len(),
            });
        }
        let mut rows = vec![Interval::ZERO; self.map.n_out()];
        for j in 0..n {
            for k in 0..n {
                let djk = self.d2[j][k].absolutify();
                if djk.is_zero() {
                    continue;
                }
                let vals = djk.eval(radii)?;
                for (i, v) in vals.into_iter().enumerate() {
                    rows[i] += v;
                }
            }
        }
        Ok(rows.into_iter().fold(Interval::ZERO, Interval::max))
    }
}
