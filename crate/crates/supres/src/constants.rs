//! Scalar constants of the multi-atom argument: the `C₁` fixed points, the
//! root `η*` and the truncation-quality curve `f(K)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::specfun::{solve_loglinear, LogLinearRoots};
use crate::{Error, Result};

pub const M1PPP: f64 = 152.0;
pub const M2: f64 = 76.0;
pub const LAMBDA: f64 = 0.9;
pub const EPS: f64 = 1e-3;
pub const C1_DEFAULT: f64 = 2500.0;
/// Lower bound on `‖q‖` entering `f(K)`.
pub const Q_NORM_FLOOR: f64 = 0.112;

/// `ζ(2) = π²/6`.
pub fn zeta2() -> f64 {
    PI * PI / 6.0
}

/// Fixed points of `x = (3+3ε)/λ·(M₁ + M₂ log x)` as `(x₀, x₋₁)` plus the
/// Lambert-W parameters.
pub fn c1_bound(lambda: f64, m1: f64, m2: f64, eps: f64) -> Result<LogLinearRoots> {
    if !(lambda > 0.0 && m1 > 0.0 && m2 >= 0.0 && eps >= 0.0) {
        return Err(Error::DomainError("c1_bound arguments must be positive".into()));
    }
    let a = (3.0 + 3.0 * eps) / lambda;
    solve_loglinear(1.0, -a * m2, -a * m1)
}

/// `c1_bound` with the default constants.
pub fn c1_bound_default() -> Result<LogLinearRoots> {
    c1_bound(LAMBDA, M1PPP, M2, EPS)
}

/// `f₂(η) = 42η + 4η log(1 + (C₁−1)/(2η) + C₁)`.
pub fn f2(eta: f64, c1: f64) -> f64 {
    42.0 * eta + 4.0 * eta * (1.0 + (c1 - 1.0) / (2.0 * eta) + c1).ln()
}

/// Root of `f₂(η) = 1` on `(1e−6, 1)` by bisection.
pub fn eta_star(c1: f64) -> Result<f64> {
    if !(c1 > 1.0) {
        return Err(Error::DomainError(format!("C₁ must exceed 1, got {c1}")));
    }
    let (mut lo, mut hi) = (1e-6, 1.0);
    if f2(lo, c1) > 1.0 || f2(hi, c1) < 1.0 {
        return Err(Error::DomainError("root not bracketed on (1e-6, 1)".into()));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f2(mid, c1) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `f(K)` with `C₁`, the constants `M₁''', M₂` and the norm floor `q_floor`.
pub fn f_k(k: f64, c1: f64, q_floor: f64) -> Result<f64> {
    if !(k >= 2.0) {
        return Err(Error::DomainError(format!("f(K) requires K ≥ 2, got {k}")));
    }
    let lk = k.ln();
    let lk1 = (k + 1.0).ln();
    let c1a = 4.0 * c1 / lk + 8.0 * c1;
    let c1b = (c1 / lk1) * (21.0 + 9.0 * (k / c1).ln() + 3.0 * lk);
    Ok(2.0 / q_floor
        * zeta2().sqrt()
        * ((c1a + c1b + c1 / lk1) * (2.0 * M1PPP + 2.0 * M2 * (1.0 + k).ln() + 1.0) * (1.0 + k).ln())
        / (1.0 + k))
}

/// `(K, f(K))` samples with the default `C₁` and norm floor.
pub fn k_bound_curve(ks: &[f64]) -> Result<Vec<(f64, f64)>> {
    k_bound_curve_with(ks, C1_DEFAULT, Q_NORM_FLOOR)
}

pub fn k_bound_curve_with(ks: &[f64], c1: f64, q_floor: f64) -> Result<Vec<(f64, f64)>> {
    ks.iter().map(|&k| Ok((k, f_k(k, c1, q_floor)?))).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantsReport {
    #[serde(rename = "C1_root_small")]
    pub c1_root_small: f64,
    #[serde(rename = "C1_root_large")]
    pub c1_root_large: f64,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub eta_star: f64,
    #[serde(rename = "fK_samples")]
    pub fk_samples: Vec<(f64, f64)>,
    #[serde(rename = "M1ppp")]
    pub m1ppp: f64,
    #[serde(rename = "M2")]
    pub m2: f64,
    pub lambda: f64,
    pub eps: f64,
    pub q_norm_floor: f64,
}

/// Default sample points for `f(K)`: `10^3 … 10^13` and `2·10^13`.
pub fn default_k_samples() -> Vec<f64> {
    let mut v: Vec<f64> = (3..=13).map(|e| 10f64.powi(e)).collect();
    v.push(2e13);
    v
}

pub fn constants_report() -> Result<ConstantsReport> {
    let roots = c1_bound_default()?;
    let large = roots.x_m1.ok_or(Error::NoRealRoot { arg: roots.arg })?;
    Ok(ConstantsReport {
        c1_root_small: roots.x0,
        c1_root_large: large,
        r1: roots.r1,
        r2: roots.r2,
        r3: roots.r3,
        eta_star: eta_star(C1_DEFAULT)?,
        fk_samples: k_bound_curve(&default_k_samples())?,
        m1ppp: M1PPP,
        m2: M2,
        lambda: LAMBDA,
        eps: EPS,
        q_norm_floor: Q_NORM_FLOOR,
    })
}

/// CSV with header `K,f_K`.
pub fn fk_csv(samples: &[(f64, f64)]) -> String {
    let mut s = String::from("K,f_K\n");
    for (k, f) in samples {
        s.push_str(&format!("{k:e},{f:.15e}\n"));
    }
    s
}
