//! The zero-finding map `F(χ; 0)` on `X = C^q × C^q × 𝒯^q × 𝒞_ν^{1+2q}`:
//! Taylor block `g` on `[0, ℓ r*]`, Chebyshev block `h` on
//! `[ℓ r*, ℓ r* + L]`, and the boundary rows that put the endpoint on the
//! unstable-free linear chart `c + Γη`, `-ΓΛη`.

use faer::linalg::solvers::Solve;
use faer::{c64, Mat};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cmat::CIMat;
use crate::dense::{Layout, SplitMat};
use crate::error::ProofError;
use crate::interval::{CInterval, Interval};
use crate::problem::{EllipticProblem, FirstOrderField};
use crate::scalar::Scalar;
use crate::seq::{ChebSeq, TaylorSeq};
use crate::spectra::SpectralData;

/// Domain split and sequence-space parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    /// Taylor rescaling: `u(r) = Σ v_n (r/ℓ)^n`.
    pub ell: f64,
    /// The Taylor piece covers `[0, ℓ r*]`.
    pub r_star: f64,
    /// Length of the Chebyshev piece.
    #[serde(rename = "L")]
    pub l: f64,
}

impl Geometry {
    /// `r0 = ℓ r* + L`, enclosed.
    pub fn r0(&self) -> Interval {
        Interval::point(self.ell) * Interval::point(self.r_star) + Interval::point(self.l)
    }

    /// Float radius of a Chebyshev node `s`.
    pub fn radius_of(&self, s: f64) -> f64 {
        self.ell * self.r_star + (s + 1.0) * self.l / 2.0
    }
}

/// Everything needed to evaluate `F` and `DF` at fixed truncation orders.
#[derive(Clone, Debug)]
pub struct BvpContext {
    pub q: usize,
    pub d: u32,
    /// Polynomial order `K ≥ 2`.
    pub k: usize,
    pub n_t: usize,
    pub n_c: usize,
    pub nu: f64,
    pub geo: Geometry,
    pub problem: EllipticProblem,
    pub field: FirstOrderField,
    pub c: Vec<Interval>,
    pub gamma: CIMat,
    pub gamma_lambda: CIMat,
    pub ell2: Interval,
    pub half_l: Interval,
    pub inv_ell_rstar: Interval,
    r_pow: Vec<Interval>,
    r_pow_d: Vec<Interval>,
    c_row0: Vec<Interval>,
}

impl BvpContext {
    pub fn new(
        problem: &EllipticProblem,
        sd: &SpectralData,
        geo: &Geometry,
        n_t: usize,
        n_c: usize,
        nu: f64,
    ) -> Result<Self, ProofError> {
        if n_t < 2 || n_c < 1 {
            return Err(ProofError::InvalidConfig("truncation needs n_T ≥ 2 and n_C ≥ 1".into()));
        }
        if !(geo.ell > 0.0 && geo.r_star > 0.0 && geo.r_star < 1.0 && geo.l > 0.0 && nu >= 1.0) {
            return Err(ProofError::InvalidConfig("geometry must satisfy ℓ, L > 0, 0 < r* < 1, ν ≥ 1".into()));
        }
        let k = problem.order();
        let ell = Interval::point(geo.ell);
        let rs = Interval::point(geo.r_star);
        let (r_pow, r_pow_d) = powers(geo, n_t)?;
        // f(w) of a degree-(K n_C + 1) argument times Df has degree < 2 K (n_C + 1)
        let n_row0 = 2 * k * (n_c + 1) + 2;
        let c_row0 = (0..=n_row0).map(cheb_row0_coeff).collect();
        Ok(BvpContext {
            q: problem.q,
            d: problem.d,
            k,
            n_t,
            n_c,
            nu,
            geo: geo.clone(),
            problem: problem.clone(),
            field: problem.first_order_field(),
            c: problem.c.clone(),
            gamma: sd.gamma.clone(),
            gamma_lambda: sd.gamma_lambda(),
            ell2: ell * ell,
            half_l: Interval::point(geo.l) * Interval::ratio(1, 2),
            inv_ell_rstar: (ell * rs).recip()?,
            r_pow,
            r_pow_d,
            c_row0,
        })
    }

    pub fn layout(&self) -> Layout {
        Layout::new(self.q, self.n_t, self.n_c, self.nu)
    }

    /// Column layout with Chebyshev blocks extended to `K n_C + 2` entries.
    pub fn ext_layout(&self) -> Layout {
        self.layout().with_c_len(self.k * self.n_c + 2)
    }

    /// Same problem at other truncation orders.
    pub fn with_orders(&self, n_t: usize, n_c: usize) -> Result<Self, ProofError> {
        let mut c = self.clone();
        let (r_pow, r_pow_d) = powers(&self.geo, n_t)?;
        c.n_t = n_t;
        c.n_c = n_c;
        c.r_pow = r_pow;
        c.r_pow_d = r_pow_d;
        c.c_row0 = (0..=2 * self.k * (n_c + 1) + 2).map(cheb_row0_coeff).collect();
        Ok(c)
    }

    /// `c_m` in `h_0 = init + (L/2) Σ c_m f_m - w_0`.
    pub fn row0_coeff(&self, m: usize) -> Interval {
        self.c_row0.get(m).copied().unwrap_or_else(|| cheb_row0_coeff(m))
    }

    pub fn r_pow(&self, m: usize) -> Interval {
        self.r_pow[m]
    }

    pub fn r_pow_d(&self, m: usize) -> Interval {
        self.r_pow_d[m]
    }

    /// `δ = (ℓ r* + L)⁻¹`.
    pub fn delta(&self) -> Interval {
        self.geo.r0().recip().unwrap_or(Interval::ENTIRE)
    }
}

/// `r*^m` and `(m/ℓ) r*^{m-1}` for `m ≤ n_T`; the second pairs with `v` to
/// give `u'(ℓ r*)`.
fn powers(geo: &Geometry, n_t: usize) -> Result<(Vec<Interval>, Vec<Interval>), ProofError> {
    let rs = Interval::point(geo.r_star);
    let inv_ell = Interval::point(geo.ell).recip()?;
    let mut r_pow = Vec::with_capacity(n_t + 1);
    let mut p = Interval::ONE;
    for _ in 0..=n_t {
        r_pow.push(p);
        p = p * rs;
    }
    let r_pow_d = (0..=n_t)
        .map(|m| if m == 0 { Interval::ZERO } else { r_pow[m - 1] * Interval::from_int(m as i64) * inv_ell })
        .collect();
    Ok((r_pow, r_pow_d))
}

/// `1, -1/2, -2(-1)^m/(m² - 1)`.
pub fn cheb_row0_coeff(m: usize) -> Interval {
    match m {
        0 => Interval::ONE,
        1 => Interval::ratio(-1, 2),
        _ => {
            let den = (m as i64) * (m as i64) - 1;
            let sign = if m % 2 == 0 { -2 } else { 2 };
            Interval::ratio(sign, den)
        }
    }
}

/// `χ = (η, φ, v, w)`; `w` holds `w⁽¹⁾`, then `w⁽²⁾` (q entries), then `w⁽³⁾`.
#[derive(Clone, Debug, PartialEq)]
pub struct XVector<T> {
    pub eta: Vec<T>,
    pub phi: Vec<T>,
    pub v: Vec<TaylorSeq<T>>,
    pub w: Vec<ChebSeq<T>>,
}

impl<T: Scalar> XVector<T> {
    pub fn zeros(l: &Layout) -> Self {
        XVector {
            eta: vec![T::zero(); l.q],
            phi: vec![T::zero(); l.q],
            v: vec![TaylorSeq::zeros(l.t_len - 1); l.q],
            w: vec![ChebSeq::zeros(l.c_len - 1, l.nu); l.n_cheb()],
        }
    }

    pub fn from_flat(l: &Layout, x: &[T]) -> Self {
        assert_eq!(x.len(), l.dim());
        let q = l.q;
        XVector {
            eta: (0..q).map(|i| x[l.eta(i)]).collect(),
            phi: (0..q).map(|i| x[l.phi(i)]).collect(),
            v: (0..q)
                .map(|i| TaylorSeq::new(x[l.v(i, 0)..l.v(i, 0) + l.t_len].to_vec()))
                .collect(),
            w: (0..l.n_cheb())
                .map(|k| ChebSeq::new(x[l.w(k, 0)..l.w(k, 0) + l.c_len].to_vec(), l.nu))
                .collect(),
        }
    }

    /// Flattens after truncating or zero-padding to the layout.
    pub fn to_flat(&self, l: &Layout) -> Vec<T> {
        let mut out = Vec::with_capacity(l.dim());
        out.extend_from_slice(&self.eta);
        out.extend_from_slice(&self.phi);
        for v in &self.v {
            out.extend_from_slice(&v.resized(l.t_len - 1).coeffs);
        }
        for w in &self.w {
            out.extend_from_slice(&w.resized(l.c_len - 1).coeffs);
        }
        out
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U + Copy) -> XVector<U> {
        XVector {
            eta: self.eta.iter().map(|&z| f(z)).collect(),
            phi: self.phi.iter().map(|&z| f(z)).collect(),
            v: self.v.iter().map(|s| s.map(f)).collect(),
            w: self.w.iter().map(|s| s.map(f)).collect(),
        }
    }

    pub fn resized(&self, l: &Layout) -> Self {
        XVector::from_flat(l, &self.to_flat(l))
    }
}

/// `g(χ)` to all orders where it is nonzero (degree `K n_T + 2`), or only
/// rows `≤ rows` when given.
pub fn taylor_block_g<T: Scalar>(ctx: &BvpContext, phi: &[T], v: &[TaylorSeq<T>], rows: Option<usize>) -> Vec<TaylorSeq<T>> {
    let nv = ctx.problem.n.eval(v).expect("arity checked at construction");
    let ell2 = T::from_interval(ctx.ell2);
    let dm2 = ctx.d as i64 - 2;
    (0..ctx.q)
        .map(|i| {
            let full = (nv[i].degree() + 2).max(v[i].degree());
            let top = rows.map_or(full, |r| r);
            let coeffs = (0..=top)
                .map(|n| match n {
                    0 => v[i].get(0) - phi[i],
                    1 => v[i].get(1),
                    _ => {
                        let nn = n as i64;
                        T::from_interval(Interval::from_int(nn * (nn + dm2))) * v[i].get(n) + ell2 * nv[i].get(n - 2)
                    }
                })
                .collect();
            TaylorSeq::new(coeffs)
        })
        .collect()
}

/// `f(w)` and `h(χ)`; `h` to all orders where it is nonzero, or up to `rows`.
pub fn cheb_block_h<T: Scalar>(
    ctx: &BvpContext,
    v: &[TaylorSeq<T>],
    w: &[ChebSeq<T>],
    rows: Option<usize>,
) -> (Vec<ChebSeq<T>>, Vec<ChebSeq<T>>) {
    let q = ctx.q;
    let fw = ctx.field.f.eval(w).expect("arity checked at construction");
    let half_l = T::from_interval(ctx.half_l);
    let mut init = vec![T::zero(); 1 + 2 * q];
    init[0] = T::from_interval(ctx.inv_ell_rstar);
    for i in 0..q {
        let mut s = T::zero();
        let mut sd = T::zero();
        for m in 0..v[i].coeffs.len().min(ctx.n_t + 1) {
            s = s + v[i].get(m) * T::from_interval(ctx.r_pow(m));
            sd = sd + v[i].get(m) * T::from_interval(ctx.r_pow_d(m));
        }
        init[1 + i] = s;
        init[1 + q + i] = sd;
    }
    let h = (0..1 + 2 * q)
        .map(|k| {
            let f = &fw[k];
            let full = (f.degree() + 1).max(w[k].degree());
            let top = rows.map_or(full, |r| r);
            let mut coeffs = Vec::with_capacity(top + 1);
            let mut s0 = T::zero();
            for (m, &fm) in f.coeffs.iter().enumerate() {
                s0 = s0 + T::from_interval(ctx.row0_coeff(m)) * fm;
            }
            coeffs.push(init[k] + half_l * s0 - w[k].get(0));
            for n in 1..=top {
                let fac = T::from_interval(Interval::point(ctx.geo.l) / Interval::from_int(4 * n as i64));
                coeffs.push(fac * (f.get(n - 1) - f.get(n + 1)) - w[k].get(n));
            }
            ChebSeq::new(coeffs, ctx.nu)
        })
        .collect();
    (fw, h)
}

/// `(w⁽²⁾(1) - c - Γη, w⁽³⁾(1) + ΓΛη)`.
pub fn boundary_rows<T: Scalar>(ctx: &BvpContext, eta: &[T], w: &[ChebSeq<T>], gamma: &[Vec<T>], gamma_lambda: &[Vec<T>]) -> Vec<T> {
    let q = ctx.q;
    let mut out = Vec::with_capacity(2 * q);
    for i in 0..q {
        let mut s = w[1 + i].eval_at_one() - T::from_interval(ctx.c[i]);
        for j in 0..q {
            s = s - gamma[i][j] * eta[j];
        }
        out.push(s);
    }
    for i in 0..q {
        let mut s = w[1 + q + i].eval_at_one();
        for j in 0..q {
            s = s + gamma_lambda[i][j] * eta[j];
        }
        out.push(s);
    }
    out
}

pub trait FromCInterval: Scalar {
    fn from_cinterval(z: CInterval) -> Self;
}

impl FromCInterval for Complex64 {
    fn from_cinterval(z: CInterval) -> Self {
        z.mid()
    }
}

impl FromCInterval for CInterval {
    fn from_cinterval(z: CInterval) -> Self {
        z
    }
}

/// `π F(χ; 0)` at the context's orders, flattened on `ctx.layout()`.
pub fn eval_f_truncated<T: FromCInterval>(ctx: &BvpContext, x: &XVector<T>) -> Vec<T> {
    let l = ctx.layout();
    let gm: Vec<Vec<T>> = ctx.gamma.iter().map(|r| r.iter().map(|&z| T::from_cinterval(z)).collect()).collect();
    let glm: Vec<Vec<T>> = ctx
        .gamma_lambda
        .iter()
        .map(|r| r.iter().map(|&z| T::from_cinterval(z)).collect())
        .collect();
    let b = boundary_rows(ctx, &x.eta, &x.w, &gm, &glm);
    let g = taylor_block_g(ctx, &x.phi, &x.v, Some(ctx.n_t));
    let (_, h) = cheb_block_h(ctx, &x.v, &x.w, Some(ctx.n_c));
    let mut out = Vec::with_capacity(l.dim());
    out.extend_from_slice(&b);
    for s in &g {
        out.extend_from_slice(&s.coeffs);
    }
    for s in &h {
        out.extend_from_slice(&s.coeffs);
    }
    out
}

/// Which unknown a column of `DF` belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Column {
    Eta(usize),
    Phi(usize),
    V(usize, usize),
    W(usize, usize),
}

/// Multiplication operators `DN(v̄)` on `𝒯^q` and `Df(w̄)` on `𝒞_ν^{1+2q}`.
pub struct Linearization<T> {
    pub dn: Vec<Vec<Option<TaylorSeq<T>>>>,
    pub df: Vec<Vec<Option<ChebSeq<T>>>>,
}

impl<T: Scalar> Linearization<T> {
    pub fn new(ctx: &BvpContext, v: &[TaylorSeq<T>], w: &[ChebSeq<T>]) -> Self {
        Linearization {
            dn: ctx.problem.n.jacobian(v).expect("arity checked"),
            df: ctx.field.f.jacobian(w).expect("arity checked"),
        }
    }
}

/// `{a * e_{m'}}_m` for a Chebyshev multiplier `a`.
#[inline]
fn cheb_mult_entry<T: Scalar>(a: &ChebSeq<T>, m: usize, mp: usize) -> T {
    if mp == 0 {
        a.get(m)
    } else {
        a.get(m.abs_diff(mp)) + a.get(m + mp)
    }
}

/// Writes column `col` of `π DF(χ̄; 0)` (rows on `ctx.layout()`) into `out`,
/// skipping the complex `η` columns. Returns false for `η` columns.
pub fn df_real_column<T: Scalar>(ctx: &BvpContext, lin: &Linearization<T>, col: Column, out: &mut [T]) -> bool {
    let l = ctx.layout();
    let q = ctx.q;
    for o in out.iter_mut() {
        *o = T::zero();
    }
    match col {
        Column::Eta(_) => return false,
        Column::Phi(j) => {
            out[l.v(j, 0)] = -T::one();
        }
        Column::V(j, m) => {
            if m < 2 {
                out[l.v(j, m)] = T::one();
            } else {
                let mm = m as i64;
                out[l.v(j, m)] = T::from_interval(Interval::from_int(mm * (mm + ctx.d as i64 - 2)));
            }
            let ell2 = T::from_interval(ctx.ell2);
            for i in 0..q {
                if let Some(a) = &lin.dn[i][j] {
                    for n in (m + 2)..=ctx.n_t {
                        let c = a.get(n - 2 - m);
                        if !c.is_zero() {
                            out[l.v(i, n)] = out[l.v(i, n)] + ell2 * c;
                        }
                    }
                }
            }
            if m <= ctx.n_t {
                out[l.w(1 + j, 0)] = T::from_interval(ctx.r_pow(m));
                out[l.w(1 + q + j, 0)] = T::from_interval(ctx.r_pow_d(m));
            }
        }
        Column::W(k, mp) => {
            let omega = if mp == 0 { T::one() } else { T::from_f64(2.0) };
            if (1..=q).contains(&k) {
                out[k - 1] = omega;
            } else if k > q {
                out[q + (k - 1 - q)] = omega;
            }
            let half_l = T::from_interval(ctx.half_l);
            for ko in 0..1 + 2 * q {
                let Some(a) = &lin.df[ko][k] else { continue };
                // row 0 sums over every index the product can reach
                let top = a.degree() + mp;
                let mut s = T::zero();
                for m in 0..=top {
                    let e = cheb_mult_entry(a, m, mp);
                    if !e.is_zero() {
                        s = s + T::from_interval(ctx.row0_coeff(m)) * e;
                    }
                }
                out[l.w(ko, 0)] = out[l.w(ko, 0)] + half_l * s;
                let lo = mp.saturating_sub(a.degree() + 1).max(1);
                let hi = (mp + a.degree() + 1).min(ctx.n_c);
                for n in lo..=hi {
                    let fac = T::from_interval(Interval::point(ctx.geo.l) / Interval::from_int(4 * n as i64));
                    let e = cheb_mult_entry(a, n - 1, mp) - cheb_mult_entry(a, n + 1, mp);
                    if !e.is_zero() {
                        out[l.w(ko, n)] = out[l.w(ko, n)] + fac * e;
                    }
                }
            }
            if mp <= ctx.n_c {
                out[l.w(k, mp)] = out[l.w(k, mp)] - T::one();
            }
        }
    }
    true
}

/// Column `j` of `η`: `-Γ e_j` in the first boundary block, `ΓΛ e_j` in the
/// second, zero elsewhere (first `2q` rows only).
pub fn df_eta_column(ctx: &BvpContext, j: usize) -> Vec<CInterval> {
    let q = ctx.q;
    let mut out = Vec::with_capacity(2 * q);
    for i in 0..q {
        out.push(-ctx.gamma[i][j]);
    }
    for i in 0..q {
        out.push(ctx.gamma_lambda[i][j]);
    }
    out
}

/// Column ids of a layout, in flat order.
pub fn columns(l: &Layout) -> Vec<Column> {
    let mut out = Vec::with_capacity(l.dim());
    out.extend((0..l.q).map(Column::Eta));
    out.extend((0..l.q).map(Column::Phi));
    for i in 0..l.q {
        out.extend((0..l.t_len).map(|m| Column::V(i, m)));
    }
    for k in 0..l.n_cheb() {
        out.extend((0..l.c_len).map(|m| Column::W(k, m)));
    }
    out
}

/// Dense complex `π DF π` at a floating-point point.
pub fn jacobian_float(ctx: &BvpContext, x: &XVector<Complex64>) -> Mat<c64> {
    let l = ctx.layout();
    let n = l.dim();
    let lin = Linearization::new(ctx, &x.v, &x.w);
    let cols = columns(&l);
    let mut m = Mat::<c64>::zeros(n, n);
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (j, &col) in cols.iter().enumerate() {
        if let Column::Eta(e) = col {
            for (i, z) in df_eta_column(ctx, e).into_iter().enumerate() {
                m[(i, j)] = z.mid();
            }
            continue;
        }
        df_real_column(ctx, &lin, col, &mut buf);
        for (i, &z) in buf.iter().enumerate() {
            if z != Complex64::new(0.0, 0.0) {
                m[(i, j)] = z;
            }
        }
    }
    m
}

fn sup_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[derive(Clone, Debug)]
pub struct NewtonReport {
    pub residual: f64,
    pub iterations: usize,
}

/// Floating-point Newton on `π F(·; 0)`.
pub fn newton_refine(
    ctx: &BvpContext,
    x0: &XVector<Complex64>,
    tol: f64,
    max_iter: usize,
) -> Result<(XVector<Complex64>, NewtonReport), ProofError> {
    let l = ctx.layout();
    let mut x = x0.resized(&l);
    let mut fx = eval_f_truncated(ctx, &x);
    let mut res = sup_norm(&fx);
    let mut best = (x.clone(), res);
    let mut stalls = 0;
    let mut it = 0;
    while res > tol && it < max_iter {
        it += 1;
        let jac = jacobian_float(ctx, &x);
        let lu = jac.partial_piv_lu();
        let rhs = Mat::<c64>::from_fn(l.dim(), 1, |i, _| fx[i]);
        let step = lu.solve(&rhs);
        if !(0..l.dim()).all(|i| step[(i, 0)].is_finite()) {
            return Err(ProofError::SingularTruncatedJacobian);
        }
        let flat: Vec<Complex64> = x.to_flat(&l).iter().enumerate().map(|(i, z)| z - step[(i, 0)]).collect();
        x = XVector::from_flat(&l, &flat);
        fx = eval_f_truncated(ctx, &x);
        res = sup_norm(&fx);
        if !res.is_finite() {
            return Err(ProofError::NewtonDiverged {
                residual: res,
                iterations: it,
            });
        }
        if res < best.1 {
            best = (x.clone(), res);
            stalls = 0;
        } else {
            stalls += 1;
            if stalls >= 3 {
                break;
            }
        }
    }
    let (x, res) = best;
    // accept a rounding floor slightly above the target
    if res > tol.max(1e-10) {
        return Err(ProofError::NewtonDiverged {
            residual: res,
            iterations: it,
        });
    }
    Ok((x, NewtonReport { residual: res, iterations: it }))
}

/// Numerical inverse of `π DF(χ̄; 0) π` split into real and imaginary parts.
pub fn build_a(ctx: &BvpContext, x: &XVector<Complex64>) -> Result<SplitMat, ProofError> {
    let jac = jacobian_float(ctx, x);
    let n = jac.nrows();
    let lu = jac.partial_piv_lu();
    let id = Mat::<c64>::from_fn(n, n, |i, j| if i == j { c64::new(1.0, 0.0) } else { c64::new(0.0, 0.0) });
    let inv = lu.solve(&id);
    let mut ok = true;
    let re = Mat::<f64>::from_fn(n, n, |i, j| {
        let v = inv[(i, j)].re;
        ok &= v.is_finite();
        v
    });
    let im = Mat::<f64>::from_fn(n, n, |i, j| {
        let v = inv[(i, j)].im;
        ok &= v.is_finite();
        v
    });
    if !ok {
        return Err(ProofError::SingularTruncatedJacobian);
    }
    // a numerically singular LU can still return finite garbage; the
    // injectivity bound catches it
    Ok(SplitMat::new(re, im))
}

/// Projects onto the fixed points of the conjugation involution: `φ, v, w`
/// real, `η_j = conj(η_{partner(j)})`.
pub fn symmetrize(x: &XVector<Complex64>, partner: &[usize]) -> XVector<Complex64> {
    let re = |z: Complex64| Complex64::new(z.re, 0.0);
    let mut y = XVector {
        eta: x.eta.clone(),
        phi: x.phi.iter().map(|&z| re(z)).collect(),
        v: x.v.iter().map(|s| s.map(re)).collect(),
        w: x.w.iter().map(|s| s.map(re)).collect(),
    };
    for (j, &p) in partner.iter().enumerate() {
        if p == j {
            y.eta[j] = re(x.eta[j]);
        } else {
            y.eta[j] = (x.eta[j] + x.eta[p].conj()) * 0.5;
        }
    }
    for (j, &p) in partner.iter().enumerate() {
        if p > j {
            y.eta[p] = y.eta[j].conj();
        }
    }
    y
}

/// True iff `χ̄` is exactly fixed by the involution.
pub fn check_symmetry(x: &XVector<Complex64>, partner: &[usize]) -> bool {
    let real = |z: &Complex64| z.im == 0.0;
    x.phi.iter().all(real)
        && x.v.iter().all(|s| s.coeffs.iter().all(real))
        && x.w.iter().all(|s| s.coeffs.iter().all(real))
        && partner.iter().enumerate().all(|(j, &p)| x.eta[j] == x.eta[p].conj())
}

/// `C⁰` value of `χ̄` at radius `r` (Taylor or Chebyshev piece).
pub fn profile_value(ctx: &BvpContext, x: &XVector<f64>, r: f64) -> Vec<f64> {
    let q = ctx.q;
    let rt = ctx.geo.ell * ctx.geo.r_star;
    if r <= rt {
        let t = r / ctx.geo.ell;
        (0..q).map(|i| x.v[i].eval(t)).collect()
    } else {
        let s = (2.0 * (r - rt) / ctx.geo.l - 1.0).clamp(-1.0, 1.0);
        (0..q).map(|i| x.w[1 + i].eval(s)).collect()
    }
}
