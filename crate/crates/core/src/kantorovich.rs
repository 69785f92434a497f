//! Certified bounds `Y`, `Z1`, `Z2`, the boundary coupling
//! `|A(Γ, ΓΛ, 0, 0)|`, and the radii inequalities.

use faer::{Mat, Par};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bvp::{self, BvpContext, Column, Linearization, XVector};
use crate::cmat;
use crate::dense::{rigorous_product, weighted_block_opnorm, Layout, OpNormAccumulator, SplitMat};
use crate::error::ProofError;
use crate::interval::{add_up, hypot_up, mul_up, CInterval, Interval, UNIT_ROUNDOFF};
use crate::manifold::ManifoldCert;
use crate::seq::{ChebSeq, TaylorSeq};

/// Columns per streamed tile.
const TILE: usize = 128;

/// `A (X + iY)` for an interval matrix given by real/imaginary midpoints and
/// radii. Returns midpoints and one radius valid for both parts.
fn apply_split(
    a: &SplitMat,
    re_mid: &Mat<f64>,
    re_rad: &Mat<f64>,
    im: Option<(&Mat<f64>, &Mat<f64>)>,
) -> (Mat<f64>, Mat<f64>, Mat<f64>) {
    let p1 = rigorous_product(a, re_mid.as_ref(), re_rad.as_ref(), Par::Seq);
    let Some((im_mid, im_rad)) = im else {
        return (p1.re, p1.im, p1.rad);
    };
    let p2 = rigorous_product(a, im_mid.as_ref(), im_rad.as_ref(), Par::Seq);
    let (m, n) = (p1.re.nrows(), p1.re.ncols());
    let u2 = 2.0 * UNIT_ROUNDOFF;
    let mut re = Mat::<f64>::zeros(m, n);
    let mut imo = Mat::<f64>::zeros(m, n);
    let mut rad = Mat::<f64>::zeros(m, n);
    for j in 0..n {
        for i in 0..m {
            let (a1, b1) = (p1.re[(i, j)], p2.im[(i, j)]);
            let (a2, b2) = (p1.im[(i, j)], p2.re[(i, j)]);
            re[(i, j)] = a1 - b1;
            imo[(i, j)] = a2 + b2;
            let round = mul_up(u2, add_up(add_up(a1.abs(), b1.abs()), add_up(a2.abs(), b2.abs())));
            rad[(i, j)] = add_up(add_up(p1.rad[(i, j)], p2.rad[(i, j)]), round);
        }
    }
    (re, imo, rad)
}

/// Upper bound of `|δ - (re + i im ± rad)|`.
fn defect_modulus(delta: f64, re: f64, im: f64, rad: f64) -> f64 {
    let r = (Interval::point(delta) - Interval::ball(re, rad)).mag();
    let i = Interval::ball(im, rad).mag();
    hypot_up(r, i)
}

fn split_columns(cols: &[Vec<CInterval>]) -> (Mat<f64>, Mat<f64>, Mat<f64>, Mat<f64>) {
    let n = cols.first().map_or(0, Vec::len);
    let w = cols.len();
    (
        Mat::from_fn(n, w, |i, j| cols[j][i].re.mid()),
        Mat::from_fn(n, w, |i, j| cols[j][i].re.rad()),
        Mat::from_fn(n, w, |i, j| cols[j][i].im.mid()),
        Mat::from_fn(n, w, |i, j| cols[j][i].im.rad()),
    )
}

/// `|A|_{B(X,X)}`, upper bound.
pub fn a_norm(ctx: &BvpContext, a: &SplitMat) -> f64 {
    let l = ctx.layout();
    weighted_block_opnorm(&l, &l, a.abs.as_ref())
}

/// `χ̄` as point intervals of its real part (valid for an 𝒮-symmetric `χ̄`,
/// whose `φ, v, w` are real).
pub fn real_part(x: &XVector<Complex64>) -> (Vec<TaylorSeq<Interval>>, Vec<ChebSeq<Interval>>) {
    (
        x.v.iter().map(|s| s.map(|z| Interval::point(z.re))).collect(),
        x.w.iter().map(|s| s.map(|z| Interval::point(z.re))).collect(),
    )
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct YBound {
    pub total: Interval,
    /// `|A π F(χ̄; 0)|`.
    pub head: Interval,
    pub tail: Interval,
}

pub fn compute_y(ctx: &BvpContext, x: &XVector<Complex64>, a: &SplitMat) -> Result<YBound, ProofError> {
    let l = ctx.layout();
    let xi = x.map(CInterval::point);
    let f = bvp::eval_f_truncated(ctx, &xi);
    let (re_mid, re_rad, im_mid, im_rad) = split_columns(&[f]);
    let (re, im, rad) = apply_split(a, &re_mid, &re_rad, Some((&im_mid, &im_rad)));
    let abs: Vec<f64> = (0..l.dim())
        .map(|i| defect_modulus(0.0, re[(i, 0)], im[(i, 0)], rad[(i, 0)]))
        .collect();
    let head = Interval::upper_bound(l.norm_of_abs(&abs));

    let (v, w) = real_part(x);
    let nv = ctx.problem.n.eval(&v)?;
    let fw = ctx.field.f.eval(&w)?;
    let nt = ctx.n_t as i64;
    let nc = ctx.n_c as i64;
    let nv_tail = nv
        .iter()
        .map(|s| s.tail(ctx.n_t - 2).norm())
        .fold(Interval::ZERO, Interval::max);
    let fw_tail = fw
        .iter()
        .map(|s| s.tail(ctx.n_c - 1).norm())
        .fold(Interval::ZERO, Interval::max);
    let nu = Interval::point(ctx.nu);
    let t1 = ctx.ell2 * nv_tail / Interval::from_int((nt + 1) * (nt + ctx.d as i64 - 1));
    let t2 = Interval::point(ctx.geo.l) * (nu + nu.recip()?) * fw_tail / Interval::from_int(4 * (nc + 1));
    let tail = t1.max(t2);
    Ok(YBound {
        total: Interval::upper_bound((head + tail).hi()),
        head,
        tail,
    })
}

/// `max_i Σ_j |DN_ij(v̄)|_𝒯` and `max_k Σ_j |Df_kj(w̄)|_{𝒞_ν}`.
pub fn mult_operator_norms(lin: &Linearization<Interval>) -> (Interval, Interval) {
    let dn = lin
        .dn
        .iter()
        .map(|row| row.iter().flatten().map(|s| s.norm()).sum::<Interval>())
        .fold(Interval::ZERO, Interval::max);
    let df = lin
        .df
        .iter()
        .map(|row| row.iter().flatten().map(|s| s.norm()).sum::<Interval>())
        .fold(Interval::ZERO, Interval::max);
    (dn, df)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Z1Bound {
    pub total: Interval,
    /// `|π - A π DF(χ̄; 0) π^{n_T, K n_C + 1}|`.
    pub head: Interval,
    pub derivative_tail: Interval,
    pub truncation_tail: Interval,
    /// `|I - A π DF π|` on the truncated space; `< 1` makes `A` injective.
    pub injectivity: f64,
}

/// Layout index of an extended column when it lies inside `π X`.
fn inner_index(l: &Layout, col: Column) -> Option<usize> {
    match col {
        Column::Eta(i) => Some(l.eta(i)),
        Column::Phi(i) => Some(l.phi(i)),
        Column::V(i, m) => (m < l.t_len).then(|| l.v(i, m)),
        Column::W(k, m) => (m < l.c_len).then(|| l.w(k, m)),
    }
}

pub fn compute_z1(ctx: &BvpContext, x: &XVector<Complex64>, a: &SplitMat, a_norm: f64) -> Result<Z1Bound, ProofError> {
    let l = ctx.layout();
    let ext = ctx.ext_layout();
    let n = l.dim();
    let (v, w) = real_part(x);
    let lin = Linearization::new(ctx, &v, &w);
    let cols = bvp::columns(&ext);
    let tiles: Vec<(usize, usize)> = (0..cols.len()).step_by(TILE).map(|s| (s, (s + TILE).min(cols.len()))).collect();

    let (head_acc, sq_acc) = tiles
        .par_iter()
        .map(|&(c0, c1)| {
            let mut head = OpNormAccumulator::new(&l, &ext);
            let mut sq = OpNormAccumulator::new(&l, &l);
            let mut buf = vec![Interval::ZERO; n];
            let block: Vec<Vec<CInterval>> = cols[c0..c1]
                .iter()
                .map(|&col| match col {
                    Column::Eta(j) => {
                        let mut c = bvp::df_eta_column(ctx, j);
                        c.resize(n, CInterval::ZERO);
                        c
                    }
                    _ => {
                        bvp::df_real_column(ctx, &lin, col, &mut buf);
                        buf.iter().map(|&z| CInterval::real(z)).collect()
                    }
                })
                .collect();
            let has_im = cols[c0..c1].iter().any(|c| matches!(c, Column::Eta(_)));
            let (re_mid, re_rad, im_mid, im_rad) = split_columns(&block);
            let im = has_im.then_some((&im_mid, &im_rad));
            let (re, imo, rad) = apply_split(a, &re_mid, &re_rad, im);
            let mut abs = vec![0.0; n];
            for (t, &col) in cols[c0..c1].iter().enumerate() {
                let inner = inner_index(&l, col);
                for (k, slot) in abs.iter_mut().enumerate() {
                    let delta = if inner == Some(k) { 1.0 } else { 0.0 };
                    *slot = defect_modulus(delta, re[(k, t)], imo[(k, t)], rad[(k, t)]);
                }
                head.push_column(c0 + t, &abs);
                if let Some(j) = inner {
                    sq.push_column(j, &abs);
                }
            }
            (head, sq)
        })
        .reduce_with(|(mut h1, mut s1), (h2, s2)| {
            h1.merge(&h2);
            s1.merge(&s2);
            (h1, s1)
        })
        .expect("at least one tile");
    let head = Interval::upper_bound(head_acc.finish());
    let injectivity = sq_acc.finish();

    let (dn_norm, df_norm) = mult_operator_norms(&lin);
    let nt = ctx.n_t as i64;
    let nc = ctx.n_c as i64;
    let k = ctx.k as i32;
    let nu = Interval::point(ctx.nu);
    let lint = Interval::point(ctx.geo.l);
    let derivative_tail = (ctx.ell2 * dn_norm / Interval::from_int((nt + 1) * (nt + ctx.d as i64 - 1)))
        .max(lint * (nu + nu.recip()?) * df_norm / Interval::from_int(4 * (nc + 1)));

    let rs = Interval::point(ctx.geo.r_star);
    let ell = Interval::point(ctx.geo.ell);
    let bnd_term = Interval::point(2.0) / nu.powi((k as i64 * nc + 2) as u32);
    let init_term = rs.powi(ctx.n_t as u32) * rs.max(Interval::from_int(nt + 1) / ell);
    let row0_term = lint * df_norm / (nu.powi((nc + 2) as u32) * Interval::from_int((nc + 2) * (nc + 2) - 1));
    let truncation_tail = Interval::upper_bound(a_norm) * bnd_term.max(init_term + row0_term);

    let total = head + derivative_tail + truncation_tail;
    Ok(Z1Bound {
        total: Interval::upper_bound(total.hi()),
        head,
        derivative_tail,
        truncation_tail,
        injectivity,
    })
}

/// `(|A| + 1) max{ℓ² |D²N_abs(|v̄_i| + ϱ)|, (L(1+ν)/2) |D²f_abs(|w̄_k| + ϱ)|}`.
pub fn compute_z2(ctx: &BvpContext, x: &XVector<Complex64>, a_norm: f64, varrho: f64) -> Result<Interval, ProofError> {
    let (v, w) = real_part(x);
    let vr = Interval::upper_bound(varrho);
    let rv: Vec<Interval> = v.iter().map(|s| Interval::upper_bound((s.norm() + vr).hi())).collect();
    let rw: Vec<Interval> = w.iter().map(|s| Interval::upper_bound((s.norm() + vr).hi())).collect();
    let t1 = ctx.ell2 * ctx.problem.n.d2_abs_norm(&rv)?;
    let half = Interval::ratio(1, 2);
    let t2 = Interval::point(ctx.geo.l) * (Interval::ONE + Interval::point(ctx.nu)) * half * ctx.field.f.d2_abs_norm(&rw)?;
    let z2 = (Interval::upper_bound(a_norm) + Interval::ONE) * t1.max(t2);
    Ok(Interval::upper_bound(z2.hi()))
}

/// `|A (Γ, ΓΛ, 0, 0)|_{B(C^q, X)}`: max over output blocks of the sum over
/// input coordinates, the induced norm for the sup-norm on `C^q`.
pub fn a_gamma_norm(ctx: &BvpContext, a: &SplitMat) -> Interval {
    let l = ctx.layout();
    let n = l.dim();
    let q = ctx.q;
    let cols: Vec<Vec<CInterval>> = (0..q)
        .map(|j| {
            let mut c = vec![CInterval::ZERO; n];
            for i in 0..q {
                c[i] = ctx.gamma[i][j];
                c[q + i] = ctx.gamma_lambda[i][j];
            }
            c
        })
        .collect();
    let (re_mid, re_rad, im_mid, im_rad) = split_columns(&cols);
    let (re, im, rad) = apply_split(a, &re_mid, &re_rad, Some((&im_mid, &im_rad)));
    let w = l.weights();
    let starts = l.block_starts();
    let mut best = 0.0f64;
    for b in 0..l.n_blocks() {
        let mut s = 0.0f64;
        for j in 0..q {
            for k in starts[b]..starts[b + 1] {
                s = add_up(s, mul_up(defect_modulus(0.0, re[(k, j)], im[(k, j)], rad[(k, j)]), w[k].hi()));
            }
        }
        best = best.max(s);
    }
    Interval::upper_bound(best)
}

/// Left-hand side of the first radii inequality at `ρ`.
pub fn radii_poly(y: Interval, z1: Interval, z2: Interval, a_gamma: Interval, ly: f64, eta_norm: Interval, rho: f64) -> Interval {
    let r = Interval::point(rho);
    let aly = a_gamma * Interval::point(ly);
    y + aly * eta_norm - (Interval::ONE - z1 - aly) * r + Interval::ratio(1, 2) * z2 * r * r
}

/// Smaller root of the radii polynomial, re-verified by substitution.
pub fn solve_radii(
    y: Interval,
    z1: Interval,
    z2: Interval,
    a_gamma: Interval,
    ly: f64,
    eta_norm: Interval,
    varrho: f64,
) -> Result<f64, ProofError> {
    let aly = a_gamma * Interval::point(ly);
    let c0 = Interval::upper_bound((y + aly * eta_norm).hi());
    let b = Interval::ONE - z1 - aly;
    let z2u = Interval::upper_bound(z2.hi());
    let b_lo = Interval::point(b.lo());
    let disc = b_lo * b_lo - Interval::point(2.0) * z2u * c0;
    if !(b.lo() > 0.0) || !(disc.lo() >= 0.0) {
        return Err(ProofError::NegativeDiscriminant {
            y: y.hi(),
            z1: z1.hi(),
            z2: z2.hi(),
        });
    }
    // 2c / (b + √disc) avoids cancellation
    let root = Interval::point(2.0) * c0 / (b_lo + disc.sqrt()?);
    let mut rho = root.hi();
    let mut ok = false;
    for _ in 0..8 {
        if radii_poly(y, z1, z2, a_gamma, ly, eta_norm, rho).hi() <= 0.0 {
            ok = true;
            break;
        }
        rho = mul_up(rho, 1.0 + 1e-12).max(f64::MIN_POSITIVE);
    }
    if !ok {
        return Err(ProofError::NegativeDiscriminant {
            y: y.hi(),
            z1: z1.hi(),
            z2: z2.hi(),
        });
    }
    let second = aly + z1 + z2 * Interval::point(rho);
    if !(second.hi() < 1.0) {
        return Err(ProofError::Constraint45bFailed(second.hi()));
    }
    if rho > varrho {
        return Err(ProofError::RhoExceedsVarrho { rho, varrho });
    }
    Ok(rho)
}

/// `max{ρ̄, |Γ| (ρ̄ + L_y (|η̄| + ρ̄))}`, upper endpoint.
pub fn c0_bound(rho: f64, ly: f64, eta_norm: Interval, gamma: &cmat::CIMat) -> f64 {
    let r = Interval::point(rho);
    let g = cmat::norm(gamma);
    let v = g * (r + Interval::point(ly) * (eta_norm + r));
    v.hi().max(rho)
}

/// `|η̄|_∞`, upper endpoint.
pub fn eta_norm(x: &XVector<Complex64>) -> Interval {
    let m = x.eta.iter().map(|&z| crate::interval::cabs_up(z)).fold(0.0, f64::max);
    Interval::upper_bound(m)
}

/// Everything a successful proof certifies, plus the run parameters.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProofCertificate {
    pub problem: String,
    pub version: String,
    pub passed: bool,
    pub y: YBound,
    pub z1: Z1Bound,
    #[serde(rename = "Z2")]
    pub z2: Interval,
    pub a_norm: f64,
    pub a_gamma_norm: Interval,
    pub eta_norm: Interval,
    pub varrho: f64,
    pub rho_bar: f64,
    pub c0_bound: f64,
    pub manifold: ManifoldCert,
    pub symmetric: bool,
    pub lambda: Vec<CInterval>,
    pub newton_residual: f64,
    pub wall_time_s: f64,
    pub config: serde_json::Value,
}
