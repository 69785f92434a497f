//! Small dense complex matrices (size `q`), floating and interval.
//! Norms are the max-row-sum norm, the operator norm of `(C^q, |·|_∞)`.

use num_complex::Complex64;

use crate::error::RigorError;
use crate::interval::{CInterval, Interval};

pub type CMat = Vec<Vec<Complex64>>;
pub type CIMat = Vec<Vec<CInterval>>;

pub fn identity(n: usize) -> CMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
                .collect()
        })
        .collect()
}

pub fn mid(m: &CIMat) -> CMat {
    m.iter().map(|r| r.iter().map(|z| z.mid()).collect()).collect()
}

pub fn point(m: &CMat) -> CIMat {
    m.iter().map(|r| r.iter().map(|&z| CInterval::point(z)).collect()).collect()
}

/// Gauss-Jordan inverse with partial pivoting; `None` if a pivot vanishes.
pub fn inverse(m: &CMat) -> Option<CMat> {
    let n = m.len();
    let mut a = m.clone();
    let mut inv = identity(n);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))?;
        let p = a[piv][col];
        if p.norm() == 0.0 || !p.is_finite() {
            return None;
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let f = a[i][col];
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                let (ac, ic) = (a[col][j], inv[col][j]);
                a[i][j] -= f * ac;
                inv[i][j] -= f * ic;
            }
        }
    }
    Some(inv)
}

pub fn mul(a: &CIMat, b: &CIMat) -> CIMat {
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut s = CInterval::ZERO;
                    for l in 0..k {
                        s += a[i][l] * b[l][j];
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn mul_vec(a: &CIMat, x: &[CInterval]) -> Vec<CInterval> {
    a.iter()
        .map(|row| {
            let mut s = CInterval::ZERO;
            for (aij, xj) in row.iter().zip(x) {
                s += *aij * *xj;
            }
            s
        })
        .collect()
}

/// Right-multiplication by a diagonal matrix.
pub fn mul_diag(a: &CIMat, d: &[CInterval]) -> CIMat {
    a.iter()
        .map(|row| row.iter().zip(d).map(|(x, y)| *x * *y).collect())
        .collect()
}

/// Upper bound of the max-row-sum norm, as an interval `[0, hi]`-style
/// enclosure of the exact norm of every member.
pub fn norm(a: &CIMat) -> Interval {
    a.iter()
        .map(|row| row.iter().map(|z| z.modulus()).sum::<Interval>())
        .fold(Interval::ZERO, Interval::max)
}

pub fn vec_norm(x: &[CInterval]) -> Interval {
    x.iter().map(|z| z.modulus()).fold(Interval::ZERO, Interval::max)
}

/// `I - a`.
pub fn identity_minus(a: &CIMat) -> CIMat {
    a.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, &z)| if i == j { CInterval::ONE - z } else { -z })
                .collect()
        })
        .collect()
}

/// Enclosure of `m⁻¹` for every member of the interval matrix `m`:
/// with `R ≈ mid(m)⁻¹` and `β = |I - R m| < 1`,
/// `|m⁻¹ - R| ≤ |R| β / (1 - β)`.
pub fn verified_inverse(m: &CIMat) -> Result<CIMat, RigorError> {
    let r = inverse(&mid(m)).ok_or(RigorError::SingularEnclosure)?;
    let ri = point(&r);
    let beta = norm(&identity_minus(&mul(&ri, m))).hi();
    if !(beta < 1.0) {
        return Err(RigorError::SingularEnclosure);
    }
    let b = Interval::upper_bound(beta);
    let rad = (norm(&ri) * b / (Interval::ONE - b)).hi();
    Ok(ri
        .iter()
        .map(|row| row.iter().map(|&z| inflate(z, rad)).collect())
        .collect())
}

fn inflate(z: CInterval, r: f64) -> CInterval {
    let e = Interval::new(-r, r);
    CInterval::new(z.re + e, z.im + e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let m = vec![
            vec![Complex64::new(1.0, 2.0), Complex64::new(0.5, 0.0)],
            vec![Complex64::new(-1.0, 0.3), Complex64::new(2.0, -1.0)],
        ];
        let inv = inverse(&m).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let s: Complex64 = (0..2).map(|k| m[i][k] * inv[k][j]).sum();
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((s - e).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn verified_inverse_contains_exact() {
        // [[2, 1], [1, 1]]⁻¹ = [[1, -1], [-1, 2]]
        let m = point(&vec![
            vec![Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0)],
            vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
        ]);
        let inv = verified_inverse(&m).unwrap();
        let exact = [[1.0, -1.0], [-1.0, 2.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!(inv[i][j].contains(Complex64::new(exact[i][j], 0.0)));
            }
        }
    }
}
