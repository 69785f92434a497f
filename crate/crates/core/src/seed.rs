//! Numerical (uncertified) initial profiles: shooting for scalar problems and
//! ingestion of sampled profiles.

use std::path::Path;

use crate::error::ProofError;
use crate::problem::EllipticProblem;
use crate::seq::TaylorSeq;

/// Samples `(r, u(r))` on `[0, r0]`, stored as rows `[r, u1, ..., uq]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeedProfile {
    pub q: usize,
    pub rows: Vec<Vec<f64>>,
}

impl SeedProfile {
    pub fn new(q: usize, rows: Vec<Vec<f64>>) -> Result<Self, ProofError> {
        let bad = |m: String| Err(ProofError::InvalidConfig(format!("seed profile: {m}")));
        if rows.len() < 8 {
            return bad("need at least 8 samples".into());
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != q + 1 {
                return bad(format!("row {i} has {} entries, expected {}", row.len(), q + 1));
            }
            if !row.iter().all(|x| x.is_finite()) {
                return bad(format!("row {i} is not finite"));
            }
            if i > 0 && row[0] <= rows[i - 1][0] {
                return bad(format!("radii not strictly increasing at row {i}"));
            }
        }
        if rows[0][0] != 0.0 {
            return bad("first sample must be at r = 0".into());
        }
        Ok(SeedProfile { q, rows })
    }

    pub fn from_json(s: &str, q: usize) -> Result<Self, ProofError> {
        let rows: Vec<Vec<f64>> = serde_json::from_str(s)?;
        SeedProfile::new(q, rows)
    }

    pub fn load(path: &Path, q: usize) -> Result<Self, ProofError> {
        let text = std::fs::read_to_string(path).map_err(|e| ProofError::Io(format!("{}: {e}", path.display())))?;
        SeedProfile::from_json(&text, q)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.rows).expect("plain floats serialize")
    }

    pub fn r_max(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r[0])
    }

    pub fn phi(&self) -> Vec<f64> {
        self.rows[0][1..].to_vec()
    }

    /// Local degree-7 Lagrange interpolation; constant extrapolation past
    /// the last sample.
    pub fn value_at(&self, r: f64) -> Vec<f64> {
        let n = self.rows.len();
        if r >= self.r_max() {
            return self.rows[n - 1][1..].to_vec();
        }
        let k = self.rows.partition_point(|row| row[0] <= r);
        let width = 8.min(n);
        let start = k.saturating_sub(width / 2).min(n - width);
        let idx: Vec<usize> = (start..start + width).collect();
        (0..self.q)
            .map(|c| {
                let mut s = 0.0;
                for &i in &idx {
                    let mut w = 1.0;
                    for &j in &idx {
                        if j != i {
                            w *= (r - self.rows[j][0]) / (self.rows[i][0] - self.rows[j][0]);
                        }
                    }
                    s += w * self.rows[i][1 + c];
                }
                s
            })
            .collect()
    }
}

/// Dormand-Prince 5(4) with step-size control. `f(r, y, dy)`; integration
/// stops early when `observe(r, y)` returns true. Returns the final state.
pub fn integrate(
    f: &dyn Fn(f64, &[f64], &mut [f64]),
    r0: f64,
    y0: &[f64],
    r1: f64,
    tol: f64,
    mut observe: impl FnMut(f64, &[f64]) -> bool,
) -> Result<(f64, Vec<f64>), ProofError> {
    const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
    let n = y0.len();
    let mut r = r0;
    let mut y = y0.to_vec();
    let mut h = ((r1 - r0) / 100.0).min(0.01);
    let mut k = vec![vec![0.0; n]; 7];
    let mut tmp = vec![0.0; n];
    let mut steps = 0usize;
    while r < r1 {
        steps += 1;
        if steps > 10_000_000 {
            return Err(ProofError::InvalidConfig("integrator step limit reached".into()));
        }
        if r1 - r <= 1e-13 * (1.0 + r.abs()) {
            break;
        }
        let clipped = h >= r1 - r;
        h = h.min(r1 - r);
        for s in 0..7 {
            for i in 0..n {
                tmp[i] = y[i] + h * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>();
            }
            let (ks, _) = k.split_at_mut(s + 1);
            f(r + C[s] * h, &tmp, &mut ks[s]);
        }
        let mut err = 0.0f64;
        let mut ynew = vec![0.0; n];
        for i in 0..n {
            let y5 = y[i] + h * (0..7).map(|j| B5[j] * k[j][i]).sum::<f64>();
            let y4 = y[i] + h * (0..7).map(|j| B4[j] * k[j][i]).sum::<f64>();
            let sc = tol * (1.0 + y[i].abs().max(y5.abs()));
            err = err.max((y5 - y4).abs() / sc);
            ynew[i] = y5;
        }
        if !err.is_finite() {
            return Err(ProofError::InvalidConfig("integrator produced non-finite values".into()));
        }
        if err <= 1.0 {
            r += h;
            y = ynew;
            if observe(r, &y) {
                break;
            }
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= fac;
        // a step shortened to land on r1 says nothing about stiffness
        if !clipped && h < 1e-14 * (1.0 + r.abs()) {
            return Err(ProofError::InvalidConfig("integrator step underflow".into()));
        }
    }
    Ok((r, y))
}

/// Taylor coefficients (unscaled, `ℓ = 1`) of the regular solution with
/// `u(0) = φ`, from the recurrence `n (n+d-2) v_n + N(v)_{n-2} = 0`.
pub fn taylor_from_phi(p: &EllipticProblem, phi: &[f64], ell: f64, degree: usize) -> Vec<TaylorSeq<f64>> {
    let q = p.q;
    let mut v: Vec<TaylorSeq<f64>> = phi.iter().map(|&x| TaylorSeq::new(vec![x])).collect();
    let ell2 = ell * ell;
    for n in 1..=degree {
        let next: Vec<f64> = if n == 1 {
            vec![0.0; q]
        } else {
            // only coefficients up to n-2 of N(v) are needed; they depend on v_0..v_{n-2}
            let nv = p.n.eval(&v).expect("arity checked");
            let nn = (n * (n + p.d as usize - 2)) as f64;
            (0..q).map(|i| -ell2 * nv[i].get(n - 2) / nn).collect()
        };
        for i in 0..q {
            v[i].coeffs.push(next[i]);
        }
    }
    v
}

/// Integrates the radial ODE for `q = 1` from `u(0) = φ`; records samples
/// at `grid` radii when given. Also returns how often `u` crossed `c`
/// before turning away from it.
fn shoot_once(
    p: &EllipticProblem,
    phi: f64,
    r_end: f64,
    grid: Option<&[f64]>,
) -> Result<(usize, Vec<Vec<f64>>), ProofError> {
    let c = p.c[0].mid();
    let d = p.d as f64;
    let r_start = 0.05f64.min(r_end / 4.0);
    let series = taylor_from_phi(p, &[phi], 1.0, 40);
    let u0 = series[0].eval(r_start);
    let du0 = series[0].eval_deriv_scaled(r_start, crate::interval::Interval::ONE);
    let rhs = |r: f64, y: &[f64], dy: &mut [f64]| {
        let nu = p.n.map.eval(&[y[0]]).expect("arity checked")[0];
        dy[0] = y[1];
        dy[1] = -(d - 1.0) / r * y[1] - nu;
    };
    let mut rows = Vec::new();
    let mut crossings = 0usize;
    let mut prev_sign = (phi - c).signum();
    let mut turned = None;
    let mut approaching = false;
    // left far behind: classify by the crossings seen so far
    let escape = 10.0 * (phi - c).abs().max(1.0);
    let mut r_prev = r_start;
    let mut y_prev = vec![u0, du0];
    let record = grid.is_some();
    let grid = grid.unwrap_or(&[]);
    let mut gi = 0;
    while gi < grid.len() && grid[gi] <= r_start {
        let s = grid[gi];
        rows.push(vec![s, series[0].eval(s)]);
        gi += 1;
    }
    // integrate piecewise so that every grid radius is hit exactly
    let mut targets: Vec<f64> = grid[gi..].to_vec();
    if targets.last().map_or(true, |&t| t < r_end) {
        targets.push(r_end);
    }
    for &t in &targets {
        if t <= r_prev {
            continue;
        }
        let (r_hit, y) = integrate(&rhs, r_prev, &y_prev, t, 1e-13, |_, y| {
            let s = (y[0] - c).signum();
            if s != 0.0 && s != prev_sign {
                crossings += 1;
                prev_sign = s;
                approaching = false;
            }
            // an extremum on the current side of c, i.e. moving away again
            // after having approached it
            if !record && (y[0] - c).abs() > escape {
                turned = Some(crossings);
                return true;
            }
            let toward = (y[0] - c) * y[1] < 0.0;
            if toward {
                approaching = true;
            } else if !record && approaching && (y[0] - c) * y[1] > 0.0 {
                turned = Some(crossings);
                return true;
            }
            false
        })?;
        if turned.is_some() {
            break;
        }
        r_prev = r_hit;
        y_prev = y;
        if record && (grid.contains(&t)) {
            rows.push(vec![t, y_prev[0]]);
        }
    }
    Ok((turned.unwrap_or(crossings), rows))
}

/// Bisection on `φ = u(0)` between profiles with at most `crossings` sign
/// changes of `u - c` and profiles with more.
pub fn shoot_seed(
    p: &EllipticProblem,
    r0: f64,
    phi_range: [f64; 2],
    crossings: usize,
) -> Result<SeedProfile, ProofError> {
    if p.q != 1 {
        return Err(ProofError::InvalidConfig("shooting is only available for scalar problems".into()));
    }
    let class = |phi: f64| -> Result<bool, ProofError> {
        let (n, _) = shoot_once(p, phi, r0, None)?;
        Ok(n > crossings)
    };
    let (mut a, mut b) = (phi_range[0], phi_range[1]);
    let (ca, cb) = (class(a)?, class(b)?);
    if ca == cb {
        return Err(ProofError::NoSignChange(a, b));
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a.min(b) || m >= a.max(b) {
            break;
        }
        if class(m)? == ca {
            a = m;
        } else {
            b = m;
        }
    }
    let n = (r0 / 0.01).ceil() as usize;
    let grid: Vec<f64> = (0..=n).map(|i| r0 * i as f64 / n as f64).collect();
    let (_, rows) = shoot_once(p, a, r0, Some(&grid))?;
    SeedProfile::new(1, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::CustomProblemSpec;

    fn sech2() -> EllipticProblem {
        let spec: CustomProblemSpec = serde_json::from_str(
            r#"{"q": 1, "d": 1, "monomials": [
                {"target": 0, "powers": [1], "coeff": "-4"},
                {"target": 0, "powers": [2], "coeff": "6"}], "c": ["0"]}"#,
        )
        .unwrap();
        spec.build().unwrap()
    }

    #[test]
    fn integrator_matches_exponential() {
        let f = |_r: f64, y: &[f64], dy: &mut [f64]| dy[0] = -y[0];
        let (_, y) = integrate(&f, 0.0, &[1.0], 3.0, 1e-12, |_, _| false).unwrap();
        assert!((y[0] - (-3.0f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn taylor_recurrence_matches_sech2() {
        // sech²(r) = 1 - r² + 2/3 r⁴ - 17/45 r⁶ + ...
        let v = taylor_from_phi(&sech2(), &[1.0], 1.0, 6);
        let expect = [1.0, 0.0, -1.0, 0.0, 2.0 / 3.0, 0.0, -17.0 / 45.0];
        for (a, b) in v[0].coeffs.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14, "{a} vs {b}");
        }
    }

    #[test]
    fn shooting_recovers_sech2() {
        let seed = shoot_seed(&sech2(), 8.0, [0.5, 1.5], 0).unwrap();
        assert!((seed.phi()[0] - 1.0).abs() < 1e-9);
        for row in seed.rows.iter().step_by(37) {
            let r: f64 = row[0];
            let exact = 1.0 / r.cosh().powi(2);
            // the decaying branch is unstable, so errors grow like e^{2r}
            assert!((row[1] - exact).abs() < 1e-6, "r = {r}: {} vs {exact}", row[1]);
        }
    }

    #[test]
    fn no_sign_change_is_reported() {
        assert!(matches!(shoot_seed(&sech2(), 8.0, [0.2, 0.5], 0), Err(ProofError::NoSignChange(..))));
    }

    #[test]
    fn interpolation_is_accurate() {
        let rows: Vec<Vec<f64>> = (0..200).map(|i| {
            let r = i as f64 * 0.05;
            vec![r, (-r).exp()]
        }).collect();
        let s = SeedProfile::new(1, rows).unwrap();
        for &r in &[0.013, 1.234, 7.77, 9.93] {
            assert!((s.value_at(r)[0] - (-r as f64).exp()).abs() < 1e-12);
        }
    }
}
