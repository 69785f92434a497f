//! Exact coefficients of the manufactured solution `u(r) = sech²(r)` of
//! `u'' - 4u + 6u² = 0` on `R¹` and its distance to a certified `χ̄`.

use num_complex::Complex64;
use radproof::bvp::XVector;
use radproof::pipeline::ProofRun;

use super::fx::{self, Fx};

/// Taylor terms kept beyond the truncation; at `ℓ = 1/2` the true
/// coefficients decay like `n π^{-n}`, so the remainder is below 1e-60.
const TAYLOR_TERMS: usize = 160;
/// Chebyshev nodes of the oracle interpolant. Every component is analytic
/// in a Bernstein ellipse of parameter ≥ 1.4 around the Chebyshev interval,
/// so aliasing and the neglected tail are below 1e-30.
const CHEB_NODES: usize = 240;
/// Covers the neglected tails and the fixed-point rounding, both orders of
/// magnitude smaller.
const ORACLE_SLACK: f64 = 1e-28;

pub struct Distance {
    pub blocks: Vec<f64>,
    pub total: Fx,
    pub rho_bar: f64,
}

impl Distance {
    /// `|χ̃ - χ̄|_X ≤ ρ̄`, decided exactly.
    pub fn within(&self) -> bool {
        fx::cmp_f64(&self.total, self.rho_bar).is_le()
    }
}

fn sech2_parts(r: &Fx) -> (Fx, Fx) {
    let e = fx::exp(&(-&r.mul_int(2)));
    let one = Fx::int(1);
    let den = &one + &e;
    let s2 = e.mul_int(4).div(&(&den * &den));
    let tanh = (&one - &e).div(&den);
    let du = -&(&s2 * &tanh).mul_int(2);
    (s2, du)
}

fn weighted_sum(diffs: &[Fx], nu: &Fx) -> Fx {
    let mut w = Fx::int(1);
    let mut s = Fx::zero();
    for (n, d) in diffs.iter().enumerate() {
        if n == 1 {
            w = nu.mul_int(2);
        } else if n > 1 {
            w = &w * nu;
        }
        s = &s + &(&d.abs() * &w);
    }
    s
}

fn coeff(x: &XVector<Complex64>, block: usize, n: usize) -> f64 {
    let s = &x.w[block];
    if n < s.coeffs.len() {
        s.coeffs[n].re
    } else {
        0.0
    }
}

pub fn sech2_distance(run: &ProofRun) -> Distance {
    let ctx = &run.ctx;
    let x = &run.chi;
    let geo = &ctx.geo;
    let ell = Fx::from_f64(geo.ell);
    let a = &ell * &Fx::from_f64(geo.r_star);
    let half_l = Fx::from_f64(geo.l).div_int(2);
    let r0 = &a + &Fx::from_f64(geo.l);
    let nu = Fx::from_f64(ctx.nu);
    let mut blocks = Vec::new();

    // η̃ from u(r0) = Γ(η + α), u'(r0) = ΓΛ(α - η) with Γ = 1, Λ = 2
    let (u0, du0) = sech2_parts(&r0);
    let eta = (&u0 - &du0.div_int(2)).div_int(2);
    blocks.push((&eta - &Fx::from_f64(x.eta[0].re)).abs());
    blocks.push((&Fx::int(1) - &Fx::from_f64(x.phi[0].re)).abs());

    // n(n-1) v_n = ℓ² (4 v_{n-2} - 6 (v*v)_{n-2})
    let ell2 = &ell * &ell;
    let mut v = vec![Fx::int(1), Fx::zero()];
    for n in 2..=TAYLOR_TERMS {
        let m = n - 2;
        let mut conv = Fx::zero();
        for k in 0..=m {
            conv = &conv + &(&v[k] * &v[m - k]);
        }
        let rhs = &(&v[m].mul_int(4) - &conv.mul_int(6)) * &ell2;
        v.push(rhs.div_int((n * (n - 1)) as i64));
    }
    let mut t = Fx::zero();
    for (n, vn) in v.iter().enumerate() {
        let bar = x.v[0].coeffs.get(n).map_or(0.0, |z| z.re);
        t = &t + &(vn - &Fx::from_f64(bar)).abs();
    }
    blocks.push(t);

    let radius = |s: &Fx| &a + &(&(s + &Fx::int(1)) * &half_l);
    let w1 = fx::cheb_coeffs(|s| Fx::int(1).div(&radius(s)), CHEB_NODES);
    let w2 = fx::cheb_coeffs(|s| sech2_parts(&radius(s)).0, CHEB_NODES);
    let w3 = fx::cheb_coeffs(|s| sech2_parts(&radius(s)).1, CHEB_NODES);
    for (k, exact) in [w1, w2, w3].iter().enumerate() {
        let diffs: Vec<Fx> = exact
            .iter()
            .enumerate()
            .map(|(n, e)| e - &Fx::from_f64(coeff(x, k, n)))
            .collect();
        blocks.push(weighted_sum(&diffs, &nu));
    }

    let slack = Fx::from_f64(ORACLE_SLACK);
    let total = &blocks.iter().max().cloned().unwrap() + &slack;
    Distance {
        blocks: blocks.iter().map(Fx::to_f64).collect(),
        total,
        rho_bar: run.certificate.rho_bar,
    }
}
