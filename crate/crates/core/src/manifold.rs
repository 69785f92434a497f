//! Hypotheses of the Lyapunov-Perron contraction for the local
//! center-stable manifold chart on `[0, δ] × B_μ`. The graph itself is
//! never built; only the constants are certified.

use serde::{Deserialize, Serialize};

use crate::cmat;
use crate::error::ProofError;
use crate::interval::Interval;
use crate::poly::PolynomialMap;
use crate::problem::EllipticProblem;
use crate::spectra::SpectralData;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ManifoldCert {
    pub delta: Interval,
    pub mu: Interval,
    pub lx: f64,
    pub ly: f64,
    pub psi_hat: Interval,
    pub lambda_hat: Interval,
    /// Outcomes of the three inequalities, in order (a), (b), (c).
    pub constraints_verified: [bool; 3],
}

impl ManifoldCert {
    pub fn passed(&self) -> bool {
        self.constraints_verified.iter().all(|&b| b)
    }
}

/// Entrywise nonlinear part of `DN(c + ζ)`: `|DN(c+ζ) - DN(c)|` is bounded
/// by `B_ij(R)` on `|ζ|_∞ ≤ R`. Computed once per problem.
#[derive(Clone, Debug)]
pub struct DnExpansion {
    /// `rows[j]` holds `|∂N/∂u_j (c + ζ)|` with constant terms removed.
    cols: Vec<PolynomialMap>,
    q: usize,
}

impl DnExpansion {
    pub fn new(p: &EllipticProblem) -> Result<Self, ProofError> {
        let shifted = p.n.map.shift(&p.c)?;
        let q = p.q;
        let cols = (0..q)
            .map(|j| {
                let dj = shifted.derivative(j).absolutify();
                let mons = dj
                    .monomials()
                    .iter()
                    .filter(|m| m.degree() > 0)
                    .cloned()
                    .collect();
                PolynomialMap::new(q, q, mons)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DnExpansion { cols, q })
    }

    /// `B(R) = max_i Σ_j Σ_{|k|≥1} |coef| R^k` on the polydisc `|ζ_i| ≤ R_i`.
    pub fn bound(&self, radii: &[Interval]) -> Result<Interval, ProofError> {
        let mut rows = vec![Interval::ZERO; self.q];
        for c in &self.cols {
            for (i, v) in c.eval(radii)?.into_iter().enumerate() {
                rows[i] += v;
            }
        }
        Ok(rows.into_iter().fold(Interval::ZERO, Interval::max))
    }
}

/// `ψ̂ = ½ |Λ⁻¹Γ⁻¹| B(R) |Γ|` with `R_i = Σ_j |Γ_ij| (1 + Ly) μ`, the
/// componentwise reach of `Γ(y + z)`.
pub fn psi_hat_bound(
    dn: &DnExpansion,
    sd: &SpectralData,
    mu: Interval,
    ly: f64,
) -> Result<Interval, ProofError> {
    let g = cmat::norm(&sd.gamma);
    let lg = cmat::norm(&sd.lambda_inv_gamma_inv()?);
    let reach = (Interval::ONE + Interval::point(ly)) * mu;
    let radii: Vec<Interval> = sd
        .gamma
        .iter()
        .map(|row| row.iter().map(|z| z.modulus()).sum::<Interval>() * reach)
        .collect();
    Ok(Interval::ratio(1, 2) * lg * dn.bound(&radii)? * g)
}

/// Verifies the three chart inequalities with interval arithmetic.
pub fn check_constraints(
    lambda_hat: Interval,
    delta: Interval,
    mu: Interval,
    lx: f64,
    ly: f64,
    psi_hat: Interval,
    d: u32,
) -> ManifoldCert {
    let half_dm1 = Interval::ratio(d as i64 - 1, 2);
    let one_ly = Interval::ONE + Interval::point(ly);
    let a = half_dm1 * delta + psi_hat;
    let s = a * one_ly;
    let two_l = lambda_hat * Interval::point(2.0);
    let d1 = two_l - s;
    let d2 = two_l - (Interval::ratio(3 * (d as i64 - 1), 2) * delta + psi_hat * Interval::point(2.0)) * one_ly;
    let lx_i = Interval::point(lx);

    let c_a = s.certainly_lt(lambda_hat);
    let c_b = d1.lo() > 0.0 && d2.lo() > 0.0 && {
        let rhs = (d1.recip().unwrap_or(Interval::ENTIRE) + s * (d1 * d2).recip().unwrap_or(Interval::ENTIRE))
            * (half_dm1 * one_ly + a * lx_i);
        rhs.certainly_le(lx_i)
    };
    let c_c = d1.lo() > 0.0 && (s * d1.recip().unwrap_or(Interval::ENTIRE)).certainly_le(Interval::point(ly));
    ManifoldCert {
        delta,
        mu,
        lx,
        ly,
        psi_hat,
        lambda_hat,
        constraints_verified: [c_a, c_b, c_c],
    }
}

/// Finds `Ly` by iterating the right-hand side of inequality (c) from zero,
/// then adding slack until a certified check passes.
pub fn search_ly(
    lambda_hat: Interval,
    delta: Interval,
    mu: Interval,
    psi_of_ly: impl Fn(f64) -> Result<Interval, ProofError>,
    d: u32,
    lx: f64,
) -> Result<ManifoldCert, ProofError> {
    let half_dm1 = Interval::ratio(d as i64 - 1, 2);
    let mut ly = 0.0f64;
    for _ in 0..64 {
        let psi = psi_of_ly(ly)?;
        let s = (half_dm1 * delta + psi) * Interval::point(1.0 + ly);
        let den = lambda_hat * Interval::point(2.0) - s;
        if !(den.mid() > 0.0) {
            return Err(ProofError::NoAdmissibleLy);
        }
        let next = s.mid() / den.mid();
        if !next.is_finite() {
            return Err(ProofError::NoAdmissibleLy);
        }
        let done = (next - ly).abs() <= 1e-14 * next.max(1e-300);
        ly = next;
        if done {
            break;
        }
    }
    let base = ly.max(f64::MIN_POSITIVE);
    for slack in [1.1, 1.2, 1.4, 1.8, 2.6] {
        let cand = base * slack;
        let psi = psi_of_ly(cand)?;
        let cert = check_constraints(lambda_hat, delta, mu, lx, cand, psi, d);
        if cert.passed() {
            return Ok(cert);
        }
    }
    Err(ProofError::NoAdmissibleLy)
}
