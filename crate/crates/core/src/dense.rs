//! Block layout of truncations of `X = C^q × C^q × 𝒯^q × 𝒞_ν^{1+2q}`, the
//! induced operator norm on it, and rigorous products with dense
//! floating-point matrices.

use faer::linalg::matmul::matmul;
use faer::{Accum, Mat, MatRef, Par};

use crate::interval::{add_up, div_up, gamma_factor, hypot_up, mul_up, Interval, UpSum};
use crate::seq::cheb_weights;

/// Index map of a truncated `X`: `q` scalars `η`, `q` scalars `φ`, `q`
/// Taylor blocks of length `t_len`, `1 + 2q` Chebyshev blocks of length
/// `c_len`.
#[derive(Clone, Debug, PartialEq)]
pub struct Layout {
    pub q: usize,
    pub t_len: usize,
    pub c_len: usize,
    pub nu: f64,
}

impl Layout {
    pub fn new(q: usize, n_t: usize, n_c: usize, nu: f64) -> Self {
        Layout {
            q,
            t_len: n_t + 1,
            c_len: n_c + 1,
            nu,
        }
    }

    /// Same rows, Chebyshev blocks lengthened to `c_len`.
    pub fn with_c_len(&self, c_len: usize) -> Self {
        Layout { c_len, ..self.clone() }
    }

    pub fn n_cheb(&self) -> usize {
        1 + 2 * self.q
    }

    pub fn dim(&self) -> usize {
        2 * self.q + self.q * self.t_len + self.n_cheb() * self.c_len
    }

    pub fn eta(&self, i: usize) -> usize {
        i
    }

    pub fn phi(&self, i: usize) -> usize {
        self.q + i
    }

    pub fn v(&self, i: usize, m: usize) -> usize {
        debug_assert!(m < self.t_len);
        2 * self.q + i * self.t_len + m
    }

    pub fn w(&self, k: usize, m: usize) -> usize {
        debug_assert!(m < self.c_len);
        2 * self.q + self.q * self.t_len + k * self.c_len + m
    }

    pub fn n_blocks(&self) -> usize {
        5 * self.q + 1
    }

    /// Block id and position inside the block of a flat index.
    pub fn locate(&self, idx: usize) -> (usize, usize) {
        let q = self.q;
        if idx < 2 * q {
            return (idx, 0);
        }
        let t0 = 2 * q + q * self.t_len;
        if idx < t0 {
            let r = idx - 2 * q;
            return (2 * q + r / self.t_len, r % self.t_len);
        }
        let r = idx - t0;
        (3 * q + r / self.c_len, r % self.c_len)
    }

    pub fn block_of(&self, idx: usize) -> usize {
        self.locate(idx).0
    }

    /// Enclosures of the norm weight of every flat index.
    pub fn weights(&self) -> Vec<Interval> {
        let cw = cheb_weights(self.nu, self.c_len.saturating_sub(1));
        let mut out = vec![Interval::ONE; 2 * self.q + self.q * self.t_len];
        for _ in 0..self.n_cheb() {
            out.extend_from_slice(&cw[..self.c_len]);
        }
        out
    }

    /// Start of each block (plus the end), in flat indices.
    pub fn block_starts(&self) -> Vec<usize> {
        let q = self.q;
        let mut s: Vec<usize> = (0..2 * q).collect();
        let mut at = 2 * q;
        for _ in 0..q {
            s.push(at);
            at += self.t_len;
        }
        for _ in 0..self.n_cheb() {
            s.push(at);
            at += self.c_len;
        }
        s.push(at);
        s
    }

    /// `|x|_X` for a vector of entrywise modulus bounds.
    pub fn norm_of_abs(&self, abs: &[f64]) -> f64 {
        let w = self.weights();
        let starts = self.block_starts();
        let mut best = 0.0f64;
        for b in 0..self.n_blocks() {
            let mut s = UpSum::new();
            for k in starts[b]..starts[b + 1] {
                s.add(mul_up(abs[k], w[k].hi()));
            }
            best = best.max(s.finish());
        }
        best
    }
}

/// Streams columns of an operator between two truncations of `X` and
/// returns an upper bound of its induced norm:
/// `max_i Σ_b max_{j∈b} (Σ_{k∈i} ω_k |T_kj|) / ω_j`.
pub struct OpNormAccumulator {
    rows: Layout,
    cols: Layout,
    row_w: Vec<f64>,
    row_blocks: Vec<usize>,
    col_w: Vec<f64>,
    /// `acc[i * n_in + b]`
    acc: Vec<f64>,
}

impl OpNormAccumulator {
    pub fn new(rows: &Layout, cols: &Layout) -> Self {
        let row_w = rows.weights().iter().map(|w| w.hi()).collect();
        let col_w = cols.weights().iter().map(|w| w.lo()).collect();
        let row_blocks = (0..rows.dim()).map(|k| rows.block_of(k)).collect();
        OpNormAccumulator {
            acc: vec![0.0; rows.n_blocks() * cols.n_blocks()],
            rows: rows.clone(),
            cols: cols.clone(),
            row_w,
            row_blocks,
            col_w,
        }
    }

    /// Column `j` given as upper bounds of `|T_kj|` for all rows `k`.
    pub fn push_column(&mut self, j: usize, abs: &[f64]) {
        let nb = self.rows.n_blocks();
        let mut sums: Vec<UpSum> = (0..nb).map(|_| UpSum::new()).collect();
        for (k, &a) in abs.iter().enumerate() {
            if a != 0.0 {
                sums[self.row_blocks[k]].add(mul_up(a, self.row_w[k]));
            }
        }
        let b = self.cols.block_of(j);
        let n_in = self.cols.n_blocks();
        for (i, s) in sums.into_iter().enumerate() {
            let v = div_up(s.finish(), self.col_w[j]);
            let slot = &mut self.acc[i * n_in + b];
            if v > *slot || v.is_nan() {
                *slot = v;
            }
        }
    }

    /// Merges another accumulator over disjoint columns.
    pub fn merge(&mut self, other: &OpNormAccumulator) {
        for (a, b) in self.acc.iter_mut().zip(&other.acc) {
            if *b > *a || b.is_nan() {
                *a = *b;
            }
        }
    }

    pub fn finish(&self) -> f64 {
        let n_in = self.cols.n_blocks();
        let mut best = 0.0f64;
        for i in 0..self.rows.n_blocks() {
            let row = &self.acc[i * n_in..(i + 1) * n_in];
            if row.iter().any(|x| x.is_nan()) {
                return f64::INFINITY;
            }
            let s = row.iter().fold(0.0, |s, &x| add_up(s, x));
            best = best.max(s);
        }
        best
    }
}

/// Upper bound of the `X`-operator norm of a dense interval-free matrix
/// given by entrywise modulus bounds, `abs[(k, j)]`.
pub fn weighted_block_opnorm(rows: &Layout, cols: &Layout, abs: MatRef<'_, f64>) -> f64 {
    let mut acc = OpNormAccumulator::new(rows, cols);
    let mut col = vec![0.0; rows.dim()];
    for j in 0..cols.dim() {
        for (k, c) in col.iter_mut().enumerate() {
            *c = abs[(k, j)];
        }
        acc.push_column(j, &col);
    }
    acc.finish()
}

/// Complex floating-point matrix stored as real and imaginary parts.
#[derive(Clone, Debug)]
pub struct SplitMat {
    pub re: Mat<f64>,
    pub im: Mat<f64>,
    /// `|re| + |im|`, an entrywise upper bound of the modulus.
    pub abs: Mat<f64>,
}

impl SplitMat {
    pub fn new(re: Mat<f64>, im: Mat<f64>) -> Self {
        let abs = Mat::from_fn(re.nrows(), re.ncols(), |i, j| add_up(re[(i, j)].abs(), im[(i, j)].abs()));
        SplitMat { re, im, abs }
    }

    pub fn nrows(&self) -> usize {
        self.re.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.re.ncols()
    }

    /// Entrywise modulus bounds (tighter than `abs` when both parts are nonzero).
    pub fn modulus_bound(&self, i: usize, j: usize) -> f64 {
        hypot_up(self.re[(i, j)], self.im[(i, j)])
    }
}

/// Enclosure of `S · B` for a point complex `S` and a real interval matrix
/// `B = B_mid ± B_rad`: midpoints from two floating-point products and one
/// radius for both real and imaginary parts,
/// `rad = |S| (2γ_k |B_mid| + B_rad) / (1 - γ_k)` rounded up.
pub struct RigorousProduct {
    pub re: Mat<f64>,
    pub im: Mat<f64>,
    pub rad: Mat<f64>,
}

pub fn rigorous_product(s: &SplitMat, b_mid: MatRef<'_, f64>, b_rad: MatRef<'_, f64>, par: Par) -> RigorousProduct {
    let (m, k, n) = (s.nrows(), s.ncols(), b_mid.ncols());
    assert_eq!(b_mid.nrows(), k);
    let mut re = Mat::<f64>::zeros(m, n);
    let mut im = Mat::<f64>::zeros(m, n);
    matmul(re.as_mut(), Accum::Replace, s.re.as_ref(), b_mid, 1.0, par);
    matmul(im.as_mut(), Accum::Replace, s.im.as_ref(), b_mid, 1.0, par);
    let g = gamma_factor(k);
    let c1 = mul_up(2.0, g - 1.0);
    let e = Mat::<f64>::from_fn(k, n, |i, j| add_up(mul_up(c1, b_mid[(i, j)].abs()), b_rad[(i, j)]));
    let mut rad = Mat::<f64>::zeros(m, n);
    matmul(rad.as_mut(), Accum::Replace, s.abs.as_ref(), e.as_ref(), 1.0, par);
    // |S| E computed in floating point: the exact value is ≤ fl · γ_k, plus
    // an additive allowance for underflow in the k-term sums
    let tiny = mul_up(f64::MIN_POSITIVE, (k + 1) as f64);
    for j in 0..n {
        for i in 0..m {
            let r = rad[(i, j)];
            rad[(i, j)] = add_up(mul_up(r, g), tiny);
        }
    }
    RigorousProduct { re, im, rad }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_norm_is_one() {
        let l = Layout::new(1, 3, 4, 1.1);
        let n = l.dim();
        let id = Mat::<f64>::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 });
        let v = weighted_block_opnorm(&l, &l, id.as_ref());
        assert!(v >= 1.0 && v < 1.0 + 1e-12, "{v}");
    }

    #[test]
    fn shift_on_chebyshev_block_costs_nu() {
        // T e_m = e_{m+1} inside a single Chebyshev block, m ≥ 1
        let nu = 1.5;
        let l = Layout::new(1, 1, 6, nu);
        let n = l.dim();
        let mut t = Mat::<f64>::zeros(n, n);
        for m in 1..6 {
            t[(l.w(0, m + 1), l.w(0, m))] = 1.0;
        }
        let v = weighted_block_opnorm(&l, &l, t.as_ref());
        assert!((v - nu).abs() < 1e-12, "{v}");
    }

    #[test]
    fn locate_roundtrip() {
        let l = Layout::new(2, 4, 3, 1.2);
        for i in 0..2 {
            assert_eq!(l.locate(l.eta(i)), (i, 0));
            assert_eq!(l.locate(l.phi(i)), (2 + i, 0));
            for m in 0..5 {
                assert_eq!(l.locate(l.v(i, m)), (4 + i, m));
            }
        }
        for k in 0..5 {
            for m in 0..4 {
                assert_eq!(l.locate(l.w(k, m)), (6 + k, m));
            }
        }
        assert_eq!(l.block_starts().len(), l.n_blocks() + 1);
    }

    #[test]
    fn rigorous_product_encloses() {
        let s = SplitMat::new(
            Mat::from_fn(3, 4, |i, j| 0.1 * (i as f64 + 1.0) - 0.37 * j as f64),
            Mat::from_fn(3, 4, |i, j| 1.0 / (1.0 + i as f64 + j as f64)),
        );
        let b = Mat::from_fn(4, 2, |i, j| (i as f64 - j as f64) / 3.0);
        let zero = Mat::<f64>::zeros(4, 2);
        let p = rigorous_product(&s, b.as_ref(), zero.as_ref(), Par::Seq);
        for i in 0..3 {
            for j in 0..2 {
                let mut acc_re = Interval::ZERO;
                let mut acc_im = Interval::ZERO;
                for k in 0..4 {
                    acc_re += Interval::point(s.re[(i, k)]) * Interval::point(b[(k, j)]);
                    acc_im += Interval::point(s.im[(i, k)]) * Interval::point(b[(k, j)]);
                }
                let r = p.rad[(i, j)];
                assert!(acc_re.subset_of(Interval::new(p.re[(i, j)] - 2.0 * r, p.re[(i, j)] + 2.0 * r)));
                assert!(acc_im.subset_of(Interval::new(p.im[(i, j)] - 2.0 * r, p.im[(i, j)] + 2.0 * r)));
            }
        }
    }
}
