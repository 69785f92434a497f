//! Turning a sampled profile into an initial point `χ` for Newton.

use num_complex::Complex64;

use crate::bvp::{self, BvpContext, XVector};
use crate::cmat;
use crate::error::ProofError;
use crate::seed::{taylor_from_phi, SeedProfile};
use crate::seq::ChebSeq;
use crate::spectra::SpectralData;

/// Coefficients `w_n` (in `w_0 + 2 Σ w_n T_n`) of the degree-`n` interpolant
/// of `g` at the Chebyshev-Gauss nodes.
pub fn cheb_interpolate(g: impl Fn(f64) -> f64, n: usize) -> Vec<f64> {
    let m = n + 1;
    let theta: Vec<f64> = (0..m)
        .map(|j| std::f64::consts::PI * (j as f64 + 0.5) / m as f64)
        .collect();
    let vals: Vec<f64> = theta.iter().map(|t| g(t.cos())).collect();
    (0..=n)
        .map(|k| {
            let s: f64 = vals.iter().zip(&theta).map(|(v, t)| v * (k as f64 * t).cos()).sum();
            s / m as f64
        })
        .collect()
}

/// Coefficients of `dw/ds` in the same convention, degree one less.
pub fn cheb_derivative(w: &[f64]) -> Vec<f64> {
    let n = w.len() - 1;
    if n == 0 {
        return vec![0.0];
    }
    // w_k = (f_{k-1} - f_{k+1}) / (2k)  ⇒  f_{k-1} = 2k w_k + f_{k+1}
    let mut f = vec![0.0; n + 2];
    for k in (1..=n).rev() {
        f[k - 1] = 2.0 * k as f64 * w[k] + f[k + 1];
    }
    f.truncate(n);
    f
}

/// Initial `χ` at the context's (numerical) orders: Taylor part from the
/// recurrence driven by `u(0)`, Chebyshev part by collocation of the seed,
/// and `η` from `u(r0) = c + Γη`.
pub fn fit_series(ctx: &BvpContext, seed: &SeedProfile, sd: &SpectralData) -> Result<XVector<Complex64>, ProofError> {
    let q = ctx.q;
    let r0 = ctx.geo.r0().mid();
    if seed.q != q {
        return Err(ProofError::InterpolationIllConditioned(format!(
            "seed has {} components, problem has {q}",
            seed.q
        )));
    }
    if seed.r_max() < r0 * (1.0 - 1e-9) {
        return Err(ProofError::InterpolationIllConditioned(format!(
            "seed covers [0, {}] but r0 = {r0}",
            seed.r_max()
        )));
    }
    let re = |x: f64| Complex64::new(x, 0.0);
    let phi = seed.phi();
    let v = taylor_from_phi(&ctx.problem, &phi, ctx.geo.ell, ctx.n_t);

    let nc = ctx.n_c;
    let l = ctx.geo.l;
    let at = |s: f64| seed.value_at(ctx.geo.radius_of(s));
    let mut w = vec![ChebSeq::new(cheb_interpolate(|s| 1.0 / ctx.geo.radius_of(s), nc), ctx.nu)];
    let w2: Vec<Vec<f64>> = (0..q).map(|i| cheb_interpolate(|s| at(s)[i], nc)).collect();
    for c in &w2 {
        w.push(ChebSeq::new(c.clone(), ctx.nu));
    }
    for c in &w2 {
        let mut d = cheb_derivative(c);
        for x in d.iter_mut() {
            *x *= 2.0 / l;
        }
        w.push(ChebSeq::new(d, ctx.nu).resized(nc));
    }
    if w.iter().any(|s| s.coeffs.iter().any(|x| !x.is_finite())) {
        return Err(ProofError::InterpolationIllConditioned("non-finite Chebyshev coefficients".into()));
    }

    let end: Vec<Complex64> = (0..q).map(|i| re(w[1 + i].eval_at_one() - ctx.c[i].mid())).collect();
    let ginv = cmat::mid(&sd.gamma_inv);
    let eta: Vec<Complex64> = ginv.iter().map(|row| row.iter().zip(&end).map(|(a, b)| a * b).sum()).collect();

    let x = XVector {
        eta,
        phi: phi.iter().map(|&p| re(p)).collect(),
        v: v.iter().map(|s| s.map(re)).collect(),
        w: w.iter().map(|s| s.map(re)).collect(),
    };
    Ok(bvp::symmetrize(&x, &sd.partner))
}
