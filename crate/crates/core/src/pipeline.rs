//! End-to-end proof runs: seed, fit, refine, certify, emit.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;

use crate::bvp::{self, BvpContext, XVector};
use crate::config::{build_problem, LySpec, RunConfig, SeedSpec};
use crate::error::{PipelineError, ProofError, Stage, StageExt};
use crate::fit::fit_series;
use crate::interval::{CInterval, Interval};
use crate::kantorovich::{self, ProofCertificate};
use crate::manifold::{self, DnExpansion, ManifoldCert};
use crate::problem::EllipticProblem;
use crate::seed::{shoot_seed, SeedProfile};
use crate::spectra::{build_spectral_data, SpectralData};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Lower and upper clamp of the automatic a-priori radius.
const VARRHO_MIN: f64 = 1e-9;
const VARRHO_MAX: f64 = 1e-2;

/// Everything a finished run produced.
#[derive(Clone, Debug)]
pub struct ProofRun {
    pub certificate: ProofCertificate,
    pub ctx: BvpContext,
    pub chi: XVector<Complex64>,
    pub spectral: SpectralData,
}

/// Seed profile for a config: shooting or a sample file.
pub fn make_seed(cfg: &RunConfig, p: &EllipticProblem) -> Result<SeedProfile, ProofError> {
    match &cfg.seed {
        SeedSpec::Shoot { phi_range, crossings } => shoot_seed(p, cfg.geometry.r0().mid(), *phi_range, *crossings),
        SeedSpec::Samples { path } => SeedProfile::load(path, p.q),
    }
}

/// Verified eigendata only.
pub fn eigen_only(cfg: &RunConfig) -> Result<SpectralData, PipelineError> {
    let p = build_problem(&cfg.problem).stage(Stage::Problem)?;
    build_spectral_data(&p).stage(Stage::Spectra)
}

/// Refined, padded and symmetrized `χ̄` with its context.
pub fn refine(
    cfg: &RunConfig,
    p: &EllipticProblem,
    sd: &SpectralData,
    seed: &SeedProfile,
) -> Result<(BvpContext, XVector<Complex64>, f64), PipelineError> {
    let t = &cfg.truncation;
    let ctx_num = BvpContext::new(p, sd, &cfg.geometry, t.n_t_num, t.n_c_num, t.nu).stage(Stage::Config)?;
    let x0 = fit_series(&ctx_num, seed, sd).stage(Stage::Fit)?;
    let (x, report) = bvp::newton_refine(&ctx_num, &x0, 1e-12, 50).stage(Stage::Newton)?;
    let ctx = ctx_num.with_orders(t.n_t(), t.n_c()).stage(Stage::Config)?;
    let x = bvp::symmetrize(&x.resized(&ctx.layout()), &sd.partner);
    if !bvp::check_symmetry(&x, &sd.partner) {
        return Err(ProofError::SymmetryBroken).stage(Stage::Symmetry);
    }
    Ok((ctx, x, report.residual))
}

/// Manifold chart for the current a-priori radius.
fn chart(
    cfg: &RunConfig,
    ctx: &BvpContext,
    sd: &SpectralData,
    dn: &DnExpansion,
    mu: Interval,
) -> Result<ManifoldCert, ProofError> {
    let delta = ctx.delta();
    let psi = |ly: f64| manifold::psi_hat_bound(dn, sd, mu, ly);
    match cfg.manifold.ly {
        LySpec::Fixed(ly) => {
            let cert = manifold::check_constraints(sd.lambda_hat, delta, mu, cfg.manifold.lx, ly, psi(ly)?, ctx.d);
            if cert.passed() {
                Ok(cert)
            } else {
                Err(ProofError::ManifoldConstraints(format!(
                    "constraints (a, b, c) = {:?} at Ly = {ly}",
                    cert.constraints_verified
                )))
            }
        }
        LySpec::Auto(_) => manifold::search_ly(sd.lambda_hat, delta, mu, psi, ctx.d, cfg.manifold.lx),
    }
}

pub fn run_proof(cfg: &RunConfig) -> Result<ProofRun, PipelineError> {
    let start = Instant::now();
    cfg.validate().stage(Stage::Config)?;
    let p = build_problem(&cfg.problem).stage(Stage::Problem)?;
    let sd = build_spectral_data(&p).stage(Stage::Spectra)?;
    let seed = make_seed(cfg, &p).stage(Stage::Seed)?;
    let (ctx, x, residual) = refine(cfg, &p, &sd, &seed)?;

    let a = bvp::build_a(&ctx, &x).stage(Stage::Operator)?;
    let a_norm = kantorovich::a_norm(&ctx, &a);
    if !a_norm.is_finite() {
        return Err(ProofError::SingularTruncatedJacobian).stage(Stage::Operator);
    }
    let a_gamma = kantorovich::a_gamma_norm(&ctx, &a);
    let y = kantorovich::compute_y(&ctx, &x, &a).stage(Stage::Bounds)?;
    let z1 = kantorovich::compute_z1(&ctx, &x, &a, a_norm).stage(Stage::Bounds)?;
    if !(z1.injectivity < 1.0) {
        return Err(ProofError::InjectivityFailed(z1.injectivity)).stage(Stage::Bounds);
    }
    let eta = kantorovich::eta_norm(&x);
    let dn = DnExpansion::new(&p).stage(Stage::Manifold)?;

    // with a user ϱ this runs once; otherwise ϱ grows until ρ̄ fits inside
    let auto = cfg.varrho.is_none();
    let mut varrho = cfg
        .varrho
        .unwrap_or_else(|| (1e3 * residual).clamp(VARRHO_MIN, VARRHO_MAX));
    let mut attempt = 0;
    let (mcert, z2, rho) = loop {
        attempt += 1;
        let mu = Interval::upper_bound((eta + Interval::point(varrho)).hi());
        let mcert = chart(cfg, &ctx, &sd, &dn, mu).stage(Stage::Manifold)?;
        let z2 = kantorovich::compute_z2(&ctx, &x, a_norm, varrho).stage(Stage::Bounds)?;
        let bound = if auto { f64::INFINITY } else { varrho };
        let rho = kantorovich::solve_radii(y.total, z1.total, z2, a_gamma, mcert.ly, eta, bound).stage(Stage::Radii)?;
        if rho <= varrho {
            break (mcert, z2, rho);
        }
        if attempt >= 8 || 1.5 * rho > VARRHO_MAX {
            return Err(ProofError::RhoExceedsVarrho { rho, varrho }).stage(Stage::Radii);
        }
        varrho = 1.5 * rho;
    };
    let c0 = kantorovich::c0_bound(rho, mcert.ly, eta, &sd.gamma);
    let certificate = ProofCertificate {
        problem: p.name.clone(),
        version: VERSION.to_string(),
        passed: true,
        y,
        z1,
        z2,
        a_norm,
        a_gamma_norm: a_gamma,
        eta_norm: eta,
        varrho,
        rho_bar: rho,
        c0_bound: c0,
        manifold: mcert,
        symmetric: true,
        lambda: sd.lambda.clone(),
        newton_residual: residual,
        wall_time_s: start.elapsed().as_secs_f64(),
        config: serde_json::to_value(cfg).stage(Stage::Output)?,
    };
    Ok(ProofRun {
        certificate,
        ctx,
        chi: x,
        spectral: sd,
    })
}

/// Reference profile `ū` at radius `r`: Taylor piece, Chebyshev piece, then
/// `c + Γ e^{-Λ(r - r0)} η̄` past `r0`.
pub fn profile_value(ctx: &BvpContext, x: &XVector<Complex64>, sd: &SpectralData, r: f64) -> Vec<f64> {
    let r0 = ctx.geo.r0().mid();
    if r <= r0 {
        let xr = x.map(|z| z.re);
        return bvp::profile_value(ctx, &xr, r);
    }
    let g = sd.gamma_mid();
    let lam = sd.lambda_mid();
    (0..ctx.q)
        .map(|i| {
            let s: Complex64 = (0..ctx.q).map(|j| g[i][j] * (-lam[j] * (r - r0)).exp() * x.eta[j]).sum();
            ctx.c[i].mid() + s.re
        })
        .collect()
}

/// Radii and region tags of the emitted profile.
pub fn profile_grid(ctx: &BvpContext) -> Vec<(f64, &'static str)> {
    let rt = ctx.geo.ell * ctx.geo.r_star;
    let r0 = ctx.geo.r0().mid();
    let mut out = Vec::new();
    let n_t = 100;
    for i in 0..=n_t {
        out.push((rt * i as f64 / n_t as f64, "taylor"));
    }
    let n_c = 800;
    for i in 1..=n_c {
        out.push((rt + (r0 - rt) * i as f64 / n_c as f64, "cheb"));
    }
    // log-spaced out to 3 r0
    let n_tail = 200;
    for i in 1..=n_tail {
        out.push((r0 * 3f64.powf(i as f64 / n_tail as f64), "tail"));
    }
    out
}

pub fn profile_csv(run: &ProofRun) -> String {
    let q = run.ctx.q;
    let mut s = String::from("r");
    for i in 1..=q {
        let _ = write!(s, ",u{i}");
    }
    s.push_str(",region\n");
    for (r, tag) in profile_grid(&run.ctx) {
        let u = profile_value(&run.ctx, &run.chi, &run.spectral, r);
        let _ = write!(s, "{r:.17e}");
        for v in u {
            let _ = write!(s, ",{v:.17e}");
        }
        let _ = writeln!(s, ",{tag}");
    }
    s
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), ProofError> {
    std::fs::write(path, contents).map_err(|e| ProofError::Io(format!("{}: {e}", path.display())))
}

pub fn certificate_json(cert: &ProofCertificate) -> String {
    serde_json::to_string_pretty(cert).expect("certificate serializes")
}

pub fn read_certificate(path: &Path) -> Result<ProofCertificate, ProofError> {
    let text = std::fs::read_to_string(path).map_err(|e| ProofError::Io(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn fmt_iv(x: Interval) -> String {
    format!("[{:.6e}, {:.6e}]", x.lo(), x.hi())
}

fn fmt_c(z: CInterval) -> String {
    format!("{} + i{}", fmt_iv(z.re), fmt_iv(z.im))
}

pub fn spectral_report(sd: &SpectralData) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "eigenvalues of the linearization (Re > 0 branch):");
    for (j, l) in sd.lambda.iter().enumerate() {
        let _ = writeln!(s, "  lambda_{} = {}", j + 1, fmt_c(*l));
    }
    let _ = writeln!(
        s,
        "slowest rate lambda_hat in [{:.15}, {:.15}]",
        sd.lambda_hat.lo(),
        sd.lambda_hat.hi()
    );
    s
}

pub fn report(cert: &ProofCertificate) -> String {
    let mut s = String::new();
    let verdict = if cert.passed { "PASSED" } else { "FAILED" };
    let _ = writeln!(s, "{} certificate for {} (radproof {})", verdict, cert.problem, cert.version);
    let _ = writeln!(s, "  Y   = {:.3e}  (truncated {:.3e}, tail {:.3e})", cert.y.total.hi(), cert.y.head.hi(), cert.y.tail.hi());
    let _ = writeln!(
        s,
        "  Z1  = {:.3e}  (finite part {:.3e}, derivative tail {:.3e}, truncation tail {:.3e})",
        cert.z1.total.hi(),
        cert.z1.head.hi(),
        cert.z1.derivative_tail.hi(),
        cert.z1.truncation_tail.hi()
    );
    let _ = writeln!(s, "  Z2  = {:.3e}", cert.z2.hi());
    let _ = writeln!(s, "  |A| = {:.3e}, |A(G, GL, 0, 0)| = {:.3e}", cert.a_norm, cert.a_gamma_norm.hi());
    let _ = writeln!(s, "  |I - A DF| on the truncation = {:.3e}", cert.z1.injectivity);
    let m = &cert.manifold;
    let _ = writeln!(
        s,
        "  chart: delta = {:.4}, mu = {:.3e}, Lx = {}, Ly = {:.4}, psi_hat = {:.3e}, constraints {:?}",
        m.delta.hi(),
        m.mu.hi(),
        m.lx,
        m.ly,
        m.psi_hat.hi(),
        m.constraints_verified
    );
    let _ = writeln!(s, "  |eta| = {:.3e}, varrho = {:.3e}", cert.eta_norm.hi(), cert.varrho);
    let _ = writeln!(s, "  rho_bar  = {:.3e}", cert.rho_bar);
    let _ = writeln!(s, "  C0 bound = {:.3e}", cert.c0_bound);
    let _ = writeln!(s, "  wall time {:.2} s", cert.wall_time_s);
    s
}
