//! Verified eigendata of `-DN(c)`: `-DN(c) Γ = Γ Λ²` with `Re Λ > 0`,
//! first eigenvector components normalized to one.

use faer::Mat;
use num_complex::Complex64;

use crate::cmat::{self, CIMat};
use crate::error::ProofError;
use crate::interval::{CInterval, Interval};
use crate::problem::EllipticProblem;

#[derive(Clone, Debug)]
pub struct SpectralData {
    pub q: usize,
    /// Diagonal of `Λ`.
    pub lambda: Vec<CInterval>,
    /// `gamma[i][j]`: component `i` of eigenvector `j`.
    pub gamma: CIMat,
    pub gamma_inv: CIMat,
    /// Index of the eigenvalue conjugate to each one (itself when real).
    pub partner: Vec<usize>,
    /// `min Re λ_i`.
    pub lambda_hat: Interval,
    /// Radius used for the eigenpair contraction.
    pub varrho: f64,
}

impl SpectralData {
    pub fn lambda_mid(&self) -> Vec<Complex64> {
        self.lambda.iter().map(|z| z.mid()).collect()
    }

    pub fn gamma_mid(&self) -> Vec<Vec<Complex64>> {
        cmat::mid(&self.gamma)
    }

    /// `Γ Λ`.
    pub fn gamma_lambda(&self) -> CIMat {
        cmat::mul_diag(&self.gamma, &self.lambda)
    }

    /// Eigenvector matrix `M` of `Df(0, c, 0)`, blocks `[1; Γ, Γ; -ΓΛ, ΓΛ]`.
    pub fn m_matrix(&self) -> CIMat {
        let q = self.q;
        let gl = self.gamma_lambda();
        let mut m = vec![vec![CInterval::ZERO; 1 + 2 * q]; 1 + 2 * q];
        m[0][0] = CInterval::ONE;
        for i in 0..q {
            for j in 0..q {
                m[1 + i][1 + j] = self.gamma[i][j];
                m[1 + i][1 + q + j] = self.gamma[i][j];
                m[1 + q + i][1 + j] = -gl[i][j];
                m[1 + q + i][1 + q + j] = gl[i][j];
            }
        }
        m
    }

    /// `M⁻¹ = [1; ½Γ⁻¹, -½Λ⁻¹Γ⁻¹; ½Γ⁻¹, ½Λ⁻¹Γ⁻¹]`.
    pub fn m_inv(&self) -> Result<CIMat, ProofError> {
        let q = self.q;
        let lg = self.lambda_inv_gamma_inv()?;
        let h = CInterval::real(Interval::ratio(1, 2));
        let mut m = vec![vec![CInterval::ZERO; 1 + 2 * q]; 1 + 2 * q];
        m[0][0] = CInterval::ONE;
        for i in 0..q {
            for j in 0..q {
                m[1 + i][1 + j] = h * self.gamma_inv[i][j];
                m[1 + i][1 + q + j] = -(h * lg[i][j]);
                m[1 + q + i][1 + j] = h * self.gamma_inv[i][j];
                m[1 + q + i][1 + q + j] = h * lg[i][j];
            }
        }
        Ok(m)
    }

    /// `Λ⁻¹ Γ⁻¹`.
    pub fn lambda_inv_gamma_inv(&self) -> Result<CIMat, ProofError> {
        let li = self
            .lambda
            .iter()
            .map(|z| z.recip())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self
            .gamma_inv
            .iter()
            .zip(&li)
            .map(|(row, l)| row.iter().map(|z| *l * *z).collect())
            .collect())
    }
}

/// Eigenvalue/eigenvector seeds of `mid(-DN(c))`, ordered with each
/// conjugate pair adjacent (positive imaginary part first), real ones after.
fn seeds(b: &[Vec<f64>]) -> Result<Vec<(Complex64, Vec<Complex64>)>, ProofError> {
    let q = b.len();
    let m = Mat::<f64>::from_fn(q, q, |i, j| b[i][j]);
    let evd = m
        .eigen()
        .map_err(|_| ProofError::EigenvalueOnImaginaryAxis)?;
    let s = evd.S();
    let u = evd.U();
    let mut out = Vec::with_capacity(q);
    for j in 0..q {
        let mu = s.column_vector()[j];
        let g: Vec<Complex64> = (0..q).map(|i| u[(i, j)]).collect();
        out.push((Complex64::new(mu.re, mu.im), g));
    }
    let scale = out.iter().map(|(m, _)| m.norm()).fold(1.0, f64::max);
    let tol = 1e-12 * scale;
    let mut complex: Vec<_> = out.iter().filter(|(m, _)| m.im > tol).cloned().collect();
    let mut real: Vec<_> = out
        .iter()
        .filter(|(m, _)| m.im.abs() <= tol)
        .map(|(m, g)| {
            // real eigenvalue of a real matrix: pick the real eigenvector
            let k = (0..q).max_by(|&a, &b| g[a].norm().total_cmp(&g[b].norm())).unwrap_or(0);
            let phase = g[k].conj() / g[k].norm();
            (
                Complex64::new(m.re, 0.0),
                g.iter().map(|z| Complex64::new((z * phase).re, 0.0)).collect::<Vec<_>>(),
            )
        })
        .collect();
    complex.sort_by(|a, b| b.0.re.total_cmp(&a.0.re));
    real.sort_by(|a, b| a.0.re.total_cmp(&b.0.re));
    let mut ordered = Vec::with_capacity(q);
    for (m, g) in complex {
        let gc: Vec<Complex64> = g.iter().map(|z| z.conj()).collect();
        ordered.push((m, g));
        ordered.push((m.conj(), gc));
    }
    ordered.extend(real);
    if ordered.len() != q {
        return Err(ProofError::MultipleEigenvalue);
    }
    Ok(ordered)
}

/// Verified `(λ, g)` with `DN g + λ² g = 0`, `g_0 = 1`.
#[derive(Clone, Debug)]
pub struct Pair {
    pub lambda: CInterval,
    pub g: Vec<CInterval>,
}

fn residual(dn: &[Vec<CInterval>], lambda: CInterval, g: &[CInterval]) -> Vec<CInterval> {
    let l2 = lambda.sqr();
    let mut f = cmat::mul_vec(&dn.to_vec(), g);
    for (fi, gi) in f.iter_mut().zip(g) {
        *fi += l2 * *gi;
    }
    f
}

/// Jacobian in the unknowns `(λ, g_1, …, g_{q-1})`.
fn jacobian(dn: &[Vec<CInterval>], lambda: CInterval, g: &[CInterval]) -> CIMat {
    let q = g.len();
    let l2 = lambda.sqr();
    let two = CInterval::real(Interval::point(2.0));
    (0..q)
        .map(|i| {
            (0..q)
                .map(|k| {
                    if k == 0 {
                        two * lambda * g[i]
                    } else if i == k {
                        dn[i][k] + l2
                    } else {
                        dn[i][k]
                    }
                })
                .collect()
        })
        .collect()
}

fn polish(dn: &[Vec<CInterval>], mut lambda: Complex64, mut g: Vec<Complex64>) -> (Complex64, Vec<Complex64>) {
    let q = g.len();
    for _ in 0..20 {
        let li = CInterval::point(lambda);
        let gi: Vec<CInterval> = g.iter().map(|&z| CInterval::point(z)).collect();
        let f: Vec<Complex64> = residual(dn, li, &gi).iter().map(|z| z.mid()).collect();
        let jm = cmat::mid(&jacobian(dn, li, &gi));
        let Some(ji) = cmat::inverse(&jm) else { break };
        let step: Vec<Complex64> = (0..q)
            .map(|i| (0..q).map(|k| ji[i][k] * f[k]).sum())
            .collect();
        lambda -= step[0];
        for k in 1..q {
            g[k] -= step[k];
        }
        let size = step.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if size < 1e-15 * (1.0 + lambda.norm()) {
            break;
        }
    }
    (lambda, g)
}

/// Encloses the eigenpair near `(λ, g)` of the interval matrix `-dn`: the
/// zero of `(λ, g) ↦ dn g + λ² g` is unique in the ball of radius `varrho`
/// and lies within `Y / (1 - Z)` of the seed.
pub fn verify_eigenpair(dn: &[Vec<CInterval>], lambda: Complex64, g: &[Complex64], varrho: f64) -> Result<Pair, ProofError> {
    let q = g.len();
    let li = CInterval::point(lambda);
    let gi: Vec<CInterval> = g.iter().map(|&z| CInterval::point(z)).collect();
    let a = cmat::inverse(&cmat::mid(&jacobian(dn, li, &gi))).ok_or(ProofError::ContractionFailed {
        z: f64::INFINITY,
        radius: varrho,
    })?;
    let a = cmat::point(&a);
    let y = cmat::vec_norm(&cmat::mul_vec(&a, &residual(dn, li, &gi)));
    let lb = CInterval::ball(lambda, varrho);
    let gb: Vec<CInterval> = g
        .iter()
        .enumerate()
        .map(|(k, &z)| if k == 0 { CInterval::ONE } else { CInterval::ball(z, varrho) })
        .collect();
    let z = cmat::norm(&cmat::identity_minus(&cmat::mul(&a, &jacobian(dn, lb, &gb))));
    let lhs = y + z * Interval::point(varrho);
    if !(z.hi() < 1.0 && lhs.hi() < varrho) {
        return Err(ProofError::ContractionFailed {
            z: z.hi(),
            radius: varrho,
        });
    }
    let r = (y / (Interval::ONE - z)).hi();
    let real = lambda.im == 0.0 && g.iter().all(|z| z.im == 0.0);
    let ball = |z: Complex64| {
        if real {
            CInterval::real(Interval::ball(z.re, r))
        } else {
            CInterval::ball(z, r)
        }
    };
    Ok(Pair {
        lambda: ball(lambda),
        g: (0..q)
            .map(|k| if k == 0 { CInterval::ONE } else { ball(g[k]) })
            .collect(),
    })
}

/// Enclose `Λ`, `Γ`, `Γ⁻¹` and `λ̂`, trying `1e-10` first and `1e-6` on failure.
pub fn build_spectral_data(p: &EllipticProblem) -> Result<SpectralData, ProofError> {
    match spectral_data_with_radius(p, 1e-10) {
        Err(ProofError::ContractionFailed { .. }) => spectral_data_with_radius(p, 1e-6),
        r => r,
    }
}

pub fn spectral_data_with_radius(p: &EllipticProblem, varrho: f64) -> Result<SpectralData, ProofError> {
    let q = p.q;
    let dn_i = p.dn_at_c()?;
    let dn: Vec<Vec<CInterval>> = dn_i
        .iter()
        .map(|r| r.iter().map(|&x| CInterval::real(x)).collect())
        .collect();
    let b: Vec<Vec<f64>> = dn_i.iter().map(|r| r.iter().map(|x| -x.mid()).collect()).collect();
    let seeds = seeds(&b)?;
    let mut lambda = Vec::with_capacity(q);
    let mut cols: Vec<Vec<CInterval>> = Vec::with_capacity(q);
    let mut partner = vec![0; q];
    let mut j = 0;
    while j < q {
        let (mu, g) = &seeds[j];
        if mu.im == 0.0 && mu.re <= 0.0 {
            return Err(ProofError::EigenvalueOnImaginaryAxis);
        }
        let scale = g[0].norm();
        let gmax = g.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if scale <= 1e-8 * gmax {
            return Err(ProofError::FirstComponentVanishes);
        }
        let g: Vec<Complex64> = g.iter().map(|z| z / g[0]).collect();
        let g = if mu.im == 0.0 {
            g.iter().map(|z| Complex64::new(z.re, 0.0)).collect()
        } else {
            g
        };
        let (lam, g) = polish(&dn, mu.sqrt(), g);
        let pair = verify_eigenpair(&dn, lam, &g, varrho)?;
        if !(pair.lambda.re.lo() > 0.0) {
            return Err(ProofError::EigenvalueOnImaginaryAxis);
        }
        lambda.push(pair.lambda);
        cols.push(pair.g.clone());
        if mu.im > 0.0 {
            lambda.push(pair.lambda.conj());
            cols.push(pair.g.iter().map(|z| z.conj()).collect());
            partner[j] = j + 1;
            partner[j + 1] = j;
            j += 2;
        } else {
            partner[j] = j;
            j += 1;
        }
    }
    for a in 0..q {
        for b in a + 1..q {
            let (x, y) = (lambda[a], lambda[b]);
            if x.re.overlaps(y.re) && x.im.overlaps(y.im) {
                return Err(ProofError::MultipleEigenvalue);
            }
        }
    }
    let gamma: CIMat = (0..q).map(|i| (0..q).map(|j| cols[j][i]).collect()).collect();
    let gamma_inv = cmat::verified_inverse(&gamma)?;
    let lambda_hat = lambda.iter().map(|z| z.re).reduce(Interval::min).unwrap_or(Interval::ZERO);
    Ok(SpectralData {
        q,
        lambda,
        gamma,
        gamma_inv,
        partner,
        lambda_hat,
        varrho,
    })
}
