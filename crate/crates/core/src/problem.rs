//! Elliptic systems `ΔU + N(U) = 0` and the first-order radial field
//! `f(w) = (-w1², w3, -(d-1) w1 w3 - N(w2))` on `1 + 2q` variables.

use serde::{Deserialize, Serialize};

use crate::error::{ProofError, RigorError};
use crate::interval::Interval;
use crate::numstr::parse_interval;
use crate::poly::{DiffPoly, Monomial, PolynomialMap};

#[derive(Clone, Debug)]
pub struct EllipticProblem {
    pub name: String,
    pub q: usize,
    pub d: u32,
    pub n: DiffPoly,
    pub c: Vec<Interval>,
}

impl EllipticProblem {
    pub fn new(name: &str, q: usize, d: u32, n: PolynomialMap, c: Vec<Interval>) -> Result<Self, ProofError> {
        if n.n_in() != q || n.n_out() != q {
            return Err(RigorError::ArityMismatch {
                expected: q,
                got: n.n_in().max(n.n_out()),
            }
            .into());
        }
        if c.len() != q {
            return Err(RigorError::ArityMismatch {
                expected: q,
                got: c.len(),
            }
            .into());
        }
        if d == 0 {
            return Err(ProofError::InvalidConfig("dimension d must be positive".into()));
        }
        let vals = n.eval(&c)?;
        if let Some(v) = vals.iter().find(|v| !v.contains_zero()) {
            return Err(ProofError::EquilibriumNotZero(format!("{v:?}")));
        }
        Ok(EllipticProblem {
            name: name.to_string(),
            q,
            d,
            n: DiffPoly::new(n),
            c,
        })
    }

    /// Polynomial order `K ≥ 2` shared by `N` and `f`.
    pub fn order(&self) -> usize {
        self.n.map.degree().max(2) as usize
    }

    /// `DN(c)` as a real interval matrix (row-major `q × q`).
    pub fn dn_at_c(&self) -> Result<Vec<Vec<Interval>>, RigorError> {
        let jac = self.n.jacobian(&self.c)?;
        Ok(jac
            .into_iter()
            .map(|row| row.into_iter().map(|e| e.unwrap_or(Interval::ZERO)).collect())
            .collect())
    }

    pub fn first_order_field(&self) -> FirstOrderField {
        derive_first_order(self)
    }
}

/// `f` of the autonomous first-order system, with cached derivatives.
#[derive(Clone, Debug)]
pub struct FirstOrderField {
    pub q: usize,
    pub d: u32,
    pub f: DiffPoly,
}

pub fn derive_first_order(p: &EllipticProblem) -> FirstOrderField {
    let q = p.q;
    let nv = 1 + 2 * q;
    let unit = |j: usize, k: u32| {
        let mut e = vec![0u32; nv];
        e[j] = k;
        e
    };
    let mut mons = vec![Monomial {
        target: 0,
        powers: unit(0, 2),
        coeff: Interval::point(-1.0),
    }];
    for i in 0..q {
        mons.push(Monomial {
            target: 1 + i,
            powers: unit(1 + q + i, 1),
            coeff: Interval::ONE,
        });
        if p.d != 1 {
            let mut e = unit(0, 1);
            e[1 + q + i] = 1;
            mons.push(Monomial {
                target: 1 + q + i,
                powers: e,
                coeff: Interval::from_int(1 - p.d as i64),
            });
        }
    }
    for m in p.n.map.monomials() {
        let mut e = vec![0u32; nv];
        e[1..1 + q].copy_from_slice(&m.powers);
        mons.push(Monomial {
            target: 1 + q + m.target,
            powers: e,
            coeff: -m.coeff,
        });
    }
    let map = PolynomialMap::new(nv, nv, mons).expect("field arity is consistent by construction");
    FirstOrderField {
        q,
        d: p.d,
        f: DiffPoly::new(map),
    }
}

fn mono(target: usize, powers: &[u32], coeff: Interval) -> Monomial {
    Monomial {
        target,
        powers: powers.to_vec(),
        coeff,
    }
}

/// Cubic Klein-Gordon, `N(U) = -U + β1 U² + β2 U³` on `R³`, about `c = 0`.
pub fn klein_gordon(beta1: Interval, beta2: Interval) -> Result<EllipticProblem, ProofError> {
    let n = PolynomialMap::new(
        1,
        1,
        vec![
            mono(0, &[1], Interval::point(-1.0)),
            mono(0, &[2], beta1),
            mono(0, &[3], beta2),
        ],
    )?;
    EllipticProblem::new("klein-gordon", 1, 3, n, vec![Interval::ZERO])
}

/// Swift-Hohenberg written as a 2-component second-order system on `R²`.
pub fn swift_hohenberg(beta: [Interval; 4]) -> Result<EllipticProblem, ProofError> {
    let [b1, b2, b3, b4] = beta;
    let n = PolynomialMap::new(
        2,
        2,
        vec![
            mono(0, &[1, 0], b4),
            mono(0, &[0, 1], Interval::point(-1.0)),
            mono(1, &[0, 1], b4),
            mono(1, &[1, 0], -b1),
            mono(1, &[2, 0], -b2),
            mono(1, &[3, 0], -b3),
        ],
    )?;
    EllipticProblem::new("swift-hohenberg", 2, 2, n, vec![Interval::ZERO; 2])
}

/// Three-component FitzHugh-Nagumo on `R²` about its smallest homogeneous
/// equilibrium `(c*, c*, c*)`.
pub fn fitzhugh_nagumo(eps: Interval, beta: [Interval; 4]) -> Result<EllipticProblem, ProofError> {
    let [b1, b2, b3, b4] = beta;
    let ie = eps.recip()?;
    let ie2 = ie * ie;
    let ib4 = b4.recip()?;
    let ib42 = ib4 * ib4;
    let n = PolynomialMap::new(
        3,
        3,
        vec![
            mono(0, &[1, 0, 0], ie2),
            mono(0, &[3, 0, 0], -ie2),
            mono(0, &[0, 0, 0], -(ie * b1)),
            mono(0, &[0, 1, 0], -(ie * b2)),
            mono(0, &[0, 0, 1], -(ie * b3)),
            mono(1, &[1, 0, 0], Interval::ONE),
            mono(1, &[0, 1, 0], Interval::point(-1.0)),
            mono(2, &[1, 0, 0], ib42),
            mono(2, &[0, 0, 1], -ib42),
        ],
    )?;
    // homogeneous states solve υ - υ³ - ε(β1 + (β2 + β3) υ) = 0
    let a1 = Interval::ONE - eps * (b2 + b3);
    let a0 = -(eps * b1);
    let cubic = |x: Interval| a0 + a1 * x - x * x * x;
    let cstar = smallest_real_root(cubic, a0.mid(), a1.mid())
        .ok_or_else(|| ProofError::EquilibriumNotZero("no real equilibrium".into()))?;
    EllipticProblem::new("fhn3", 3, 2, n, vec![cstar; 3])
}

/// Encloses the smallest real root of `a0 + a1 x - x³` by a certified sign
/// change, refined by bisection.
fn smallest_real_root(p: impl Fn(Interval) -> Interval, a0: f64, a1: f64) -> Option<Interval> {
    let pf = |x: f64| a0 + a1 * x - x * x * x;
    // the polynomial is positive for x → -∞; scan right for the first sign change
    let bound = 1.0 + a0.abs() + a1.abs();
    let steps = 4000;
    let h = 2.0 * bound / steps as f64;
    let mut lo = -bound;
    let mut found = None;
    for k in 1..=steps {
        let x = -bound + h * k as f64;
        if pf(x) <= 0.0 {
            found = Some((lo, x));
            break;
        }
        lo = x;
    }
    let (mut a, mut b) = found?;
    let pa = p(Interval::point(a));
    let pb = p(Interval::point(b));
    if !(pa.lo() > 0.0 && pb.hi() < 0.0) {
        return None;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let pm = p(Interval::point(m));
        if pm.lo() > 0.0 {
            a = m;
        } else if pm.hi() < 0.0 {
            b = m;
        } else {
            break;
        }
    }
    Some(Interval::new(a, b))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MonomialSpec {
    pub target: usize,
    pub powers: Vec<u32>,
    pub coeff: String,
}

/// User-defined problem as it appears in a run configuration.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CustomProblemSpec {
    #[serde(default = "default_custom_name")]
    pub name: String,
    pub q: usize,
    pub d: u32,
    pub monomials: Vec<MonomialSpec>,
    pub c: Vec<String>,
}

fn default_custom_name() -> String {
    "custom".to_string()
}

impl CustomProblemSpec {
    pub fn build(&self) -> Result<EllipticProblem, ProofError> {
        let mons = self
            .monomials
            .iter()
            .map(|m| {
                Ok(Monomial {
                    target: m.target,
                    powers: m.powers.clone(),
                    coeff: parse_interval(&m.coeff).map_err(ProofError::InvalidConfig)?,
                })
            })
            .collect::<Result<Vec<_>, ProofError>>()?;
        let n = PolynomialMap::new(self.q, self.q, mons)?;
        let c = self
            .c
            .iter()
            .map(|s| parse_interval(s).map_err(ProofError::InvalidConfig))
            .collect::<Result<Vec<_>, _>>()?;
        EllipticProblem::new(&self.name, self.q, self.d, n, c)
    }
}
