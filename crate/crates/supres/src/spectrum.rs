//! Power iterations for the extreme singular values of `I − Q_K^∞ + P^∞`,
//! with a-posteriori residual bounds and a dense oracle for small `K`.
//!
//! For a Hermitian `A` and any `x ≠ 0, λ`, some eigenvalue `λ_i` satisfies
//! `|λ − λ_i| ≤ ‖Ax − λx‖/‖x‖`; every estimate carries that residual.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::qk_operator::{dense_operator, AsymptoticOperator};
use crate::{Error, Result};

/// Stated reference `σ_min` for the `K = 40` spectrum.
pub const REFERENCE_SIGMA_MIN_HIGH: f64 = 0.6754;
/// Smallest value of the reference singular-value series (reproduced
/// exactly by the dense operator at `K = 20`).
pub const REFERENCE_SIGMA_MIN_LOW: f64 = 0.58139991904902;
/// Shift slack keeping `λ_max(1 + slack)·I − A` positive semidefinite.
pub const SHIFT_SLACK: f64 = 1e-6;
pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 20_000;

#[derive(Clone, Debug)]
pub struct PowerResult {
    pub lambda: f64,
    pub x: Vec<Complex64>,
    /// `‖Ax − λx‖/‖x‖`
    pub residual: f64,
    pub iters: usize,
}

fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// Seeded uniform random complex unit vector.
pub fn start_vector(dim: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let n = norm(&x);
    x.iter_mut().for_each(|z| *z /= n);
    x
}

/// `‖Ax − λx‖₂/‖x‖₂`.
pub fn aposteriori_bound<F>(apply: F, x: &[Complex64], lambda: f64) -> Result<f64>
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    let nx = norm(x);
    if nx == 0.0 {
        return Err(Error::ZeroVector);
    }
    let y = apply(x);
    let r: f64 = y.iter().zip(x).map(|(y, x)| (y - x * lambda).norm_sqr()).sum::<f64>().sqrt();
    Ok(r / nx)
}

/// Power iteration for the top eigenvalue of a Hermitian PSD map.
///
/// Stops as soon as the Rayleigh-quotient residual is `≤ tol`; otherwise
/// fails with [`Error::NonConvergence`] after `max_iter` products.
pub fn power_largest<F>(apply: F, dim: usize, tol: f64, max_iter: usize, seed: u64) -> Result<PowerResult>
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    power_from(apply, start_vector(dim, seed), tol, max_iter)
}

fn power_from<F>(apply: F, mut x: Vec<Complex64>, tol: f64, max_iter: usize) -> Result<PowerResult>
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    let mut lambda = 0.0;
    let mut residual = f64::INFINITY;
    for it in 1..=max_iter {
        let y = apply(&x);
        lambda = dot(&x, &y).re;
        residual = y.iter().zip(&x).map(|(y, x)| (y - x * lambda).norm_sqr()).sum::<f64>().sqrt();
        if residual <= tol {
            return Ok(PowerResult { lambda, x, residual, iters: it });
        }
        let ny = norm(&y);
        if ny == 0.0 {
            return Ok(PowerResult { lambda: 0.0, x, residual: 0.0, iters: it });
        }
        x = y.into_iter().map(|z| z / ny).collect();
    }
    Err(Error::NonConvergence { iters: max_iter, residual, estimate: lambda })
}

/// Residual `r` on an eigenvalue `λ` of `M*M` mapped to a bound on the
/// singular value `√λ`.
pub fn sigma_residual(lambda: f64, r: f64) -> f64 {
    let s = lambda.max(0.0).sqrt();
    ((lambda + r).max(0.0).sqrt() - s).max(s - (lambda - r).max(0.0).sqrt())
}

#[derive(Clone, Debug)]
pub struct SmallestSingular {
    pub sigma_min: f64,
    pub x: Vec<Complex64>,
    /// Residual on the `M*M` scale.
    pub residual: f64,
    pub shift: f64,
    pub iters: usize,
}

/// `σ_min` of `M` from the top eigenvalue of `s·I − M*M`, `s = λ_max(1 + SHIFT_SLACK)`.
///
/// `normal` applies `M*M`; `lambda_max` must upper-bound its largest eigenvalue.
pub fn power_smallest_singular<F>(
    normal: F,
    dim: usize,
    lambda_max: f64,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<SmallestSingular>
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    let shift = lambda_max * (1.0 + SHIFT_SLACK);
    let shifted = |x: &[Complex64]| -> Vec<Complex64> {
        let y = normal(x);
        x.iter().zip(y).map(|(x, y)| x * shift - y).collect()
    };
    let r = power_from(shifted, start_vector(dim, seed.wrapping_add(1)), tol, max_iter)?;
    let lambda_min = (shift - r.lambda).max(0.0);
    Ok(SmallestSingular {
        sigma_min: lambda_min.sqrt(),
        x: r.x,
        residual: r.residual,
        shift,
        iters: r.iters,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    #[serde(rename = "K")]
    pub k: usize,
    pub sigma_max: f64,
    pub sigma_min: f64,
    /// Singular-value-scale residual bounds.
    pub residual_max: f64,
    pub residual_min: f64,
    /// Residuals of the underlying `M*M` eigen-estimates.
    pub eig_residual_max: f64,
    pub eig_residual_min: f64,
    pub iters_max: usize,
    pub iters_min: usize,
    /// `σ_min − residual_min > 0.5`
    pub condition_holds: bool,
    /// Which of the two reference `σ_min` values the estimate is closer to.
    pub reference_match: &'static str,
}

/// Build the structured operator and run both power iterations.
pub fn spectrum_report(k: usize, tol: f64, seed: u64) -> Result<SpectrumReport> {
    spectrum_report_with(k, tol, DEFAULT_MAX_ITER, seed)
}

pub fn spectrum_report_with(k: usize, tol: f64, max_iter: usize, seed: u64) -> Result<SpectrumReport> {
    if !(tol > 0.0) {
        return Err(Error::DomainError(format!("tolerance must be positive, got {tol}")));
    }
    let op = AsymptoticOperator::new(k);
    let dim = op.dim();
    let top = power_largest(|x| op.apply_normal(x), dim, tol, max_iter, seed)?;
    // λ_max bound: the residual bounds the distance to *some* eigenvalue
    let lmax_bound = top.lambda + top.residual;
    let low = power_smallest_singular(|x| op.apply_normal(x), dim, lmax_bound, tol, max_iter, seed)?;
    let sigma_max = top.lambda.max(0.0).sqrt();
    let lmin = low.sigma_min * low.sigma_min;
    let residual_max = sigma_residual(top.lambda, top.residual);
    let residual_min = sigma_residual(lmin, low.residual);
    let reference_match = if (low.sigma_min - REFERENCE_SIGMA_MIN_LOW).abs()
        <= (low.sigma_min - REFERENCE_SIGMA_MIN_HIGH).abs()
    {
        "0.5814"
    } else {
        "0.6754"
    };
    Ok(SpectrumReport {
        k,
        sigma_max,
        sigma_min: low.sigma_min,
        residual_max,
        residual_min,
        eig_residual_max: top.residual,
        eig_residual_min: low.residual,
        iters_max: top.iters,
        iters_min: low.iters,
        condition_holds: low.sigma_min - residual_min > 0.5,
        reference_match,
    })
}

/// Reports for several truncation sizes.
pub fn spectrum_sweep(ks: &[usize], tol: f64, seed: u64) -> Result<Vec<SpectrumReport>> {
    ks.iter().map(|&k| spectrum_report(k, tol, seed)).collect()
}

/// CSV with header `K,sigma_min,sigma_max,res_min,res_max`.
pub fn sweep_csv(reports: &[SpectrumReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["K", "sigma_min", "sigma_max", "res_min", "res_max"])
        .map_err(|e| Error::DomainError(e.to_string()))?;
    for r in reports {
        w.write_record([
            r.k.to_string(),
            format!("{:.15e}", r.sigma_min),
            format!("{:.15e}", r.sigma_max),
            format!("{:.6e}", r.residual_min),
            format!("{:.6e}", r.residual_max),
        ])
        .map_err(|e| Error::DomainError(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::DomainError(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::DomainError(e.to_string()))
}

/// All singular values of the dense `I − Q_K^∞ + P^∞`, descending.
pub fn dense_singular_values(k: usize) -> Result<Vec<f64>> {
    let m: DMatrix<f64> = dense_operator(k)?;
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}
