//! The single-atom deviation operator `M = Id − AÃ*` in the Dirichlet basis,
//! its `n → ∞` limit `Q_K^∞`, the projector `P^∞`, and a fast matvec for
//! `I − Q_K^∞ + P^∞` built from FFT convolutions.
//!
//! Indices run over `ℓ ∈ {−K..K}`; vector position `ℓ + K`.
//!
//! The limit entries are, with `J(c) = ∫₀¹ (e^{iπct} − 1)/t dt`,
//! `D(ℓ) = e^{iπℓ/2}·2 sin(πℓ/2)/(πℓ)` (`D(0) = 1`) and `α(ℓ) = −1/(2πiℓ)`,
//!
//! ```text
//! Q₁(ℓ₁,ℓ₂) = α(ℓ₁)[κ₁(ℓ₁−ℓ₂) − (−1)^{ℓ₁} κ₃(ℓ₁−ℓ₂) − (−1)^{ℓ₁} β₁(ℓ₂) + β₂(ℓ₂)],
//! κ₁(m) = (−1)^m J(−m),  κ₃(m) = (−1)^m J(m),  β₁(b) = (−1)^b J(b),  β₂(b) = (−1)^b J(−b),
//! Q₁(0, ℓ₂) = δ_{ℓ₂0},  Q₂ = conj(Q₁),  Q₃ = |D(ℓ₁)|² δ_{ℓ₂0},
//! Q^∞ = conj(D(ℓ₁)) Q₁ + D(ℓ₁) Q₂ − Q₃.
//! ```

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::specfun::j_integral;
use crate::trigpoly::cis2pi;
use crate::{Error, Result};

#[inline]
fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[inline]
fn parity(l: i64) -> f64 {
    if l.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Limit of the Dirichlet factor: `e^{iπℓ/2}·2 sin(πℓ/2)/(πℓ)`, exactly 0 for even `ℓ ≠ 0`.
pub fn d_inf(l: i64) -> Complex64 {
    match l.rem_euclid(4) {
        _ if l == 0 => c(1.0),
        0 | 2 => c(0.0),
        // e^{iπℓ/2} sin(πℓ/2): ℓ ≡ 1 → i·1, ℓ ≡ 3 → (−i)(−1) = i
        _ => Complex64::new(0.0, 2.0 / (PI * l as f64)),
    }
}

fn alpha(l: i64) -> Complex64 {
    // −1/(2πiℓ) = i/(2πℓ)
    Complex64::new(0.0, 1.0 / (2.0 * PI * l as f64))
}

/// First limit term `Q₁(ℓ₁, ℓ₂)`.
pub fn q1_entry(l1: i64, l2: i64) -> Complex64 {
    if l1 == 0 {
        return if l2 == 0 { c(1.0) } else { c(0.0) };
    }
    let m = l1 - l2;
    let s1 = parity(l1);
    let k1 = parity(m) * j_integral(-m as f64);
    let k3 = parity(m) * j_integral(m as f64);
    let b1 = parity(l2) * j_integral(l2 as f64);
    let b2 = parity(l2) * j_integral(-l2 as f64);
    alpha(l1) * (k1 - s1 * k3 - s1 * b1 + b2)
}

/// The three limit terms `(Q₁, Q₂, Q₃)` of entry `(ℓ₁, ℓ₂)`.
pub fn qk_entry_parts(l1: i64, l2: i64) -> (Complex64, Complex64, Complex64) {
    let q1 = q1_entry(l1, l2);
    let q3 = if l2 == 0 { c(d_inf(l1).norm_sqr()) } else { c(0.0) };
    (q1, q1.conj(), q3)
}

/// Entry `(ℓ₁, ℓ₂)` of `Q_K^∞`; independent of `K` beyond the range check.
pub fn qk_entry(k: usize, l1: i64, l2: i64) -> Result<Complex64> {
    let kk = k as i64;
    if l1.abs() > kk || l2.abs() > kk {
        return Err(Error::Dimension(format!("index ({l1}, {l2}) outside ±{k}")));
    }
    let (q1, q2, q3) = qk_entry_parts(l1, l2);
    let d = d_inf(l1);
    Ok(d.conj() * q1 + d * q2 - q3)
}

/// Default memory cap for dense matrices (bytes).
pub const DEFAULT_MEM_CAP: u64 = 4 << 30;
/// Largest `K` accepted by the dense builders.
pub const DENSE_K_MAX: usize = 4000;

fn dense_budget(k: usize, cap: u64) -> Result<()> {
    let dim = (2 * k + 1) as u64;
    let needed = dim * dim * 8;
    if k > DENSE_K_MAX || needed > cap {
        return Err(Error::BudgetExceeded { needed, cap });
    }
    Ok(())
}

/// Dense `Q_K^∞` (real, `(2K+1)²`) under the default memory cap.
pub fn qk_dense(k: usize) -> Result<DMatrix<f64>> {
    qk_dense_capped(k, DEFAULT_MEM_CAP)
}

/// Dense `Q_K^∞` with an explicit memory cap in bytes.
pub fn qk_dense_capped(k: usize, cap: u64) -> Result<DMatrix<f64>> {
    dense_budget(k, cap)?;
    let kk = k as i64;
    let dim = 2 * k + 1;
    let jt: Vec<Complex64> = (0..=(2 * kk)).map(|m| j_integral(m as f64)).collect();
    let j = |m: i64| if m >= 0 { jt[m as usize] } else { jt[(-m) as usize].conj() };
    Ok(DMatrix::from_fn(dim, dim, |i, jj| {
        let (l1, l2) = (i as i64 - kk, jj as i64 - kk);
        if l1 == 0 {
            return if l2 == 0 { 1.0 } else { 0.0 };
        }
        let d = d_inf(l1);
        if d == c(0.0) {
            return 0.0;
        }
        let m = l1 - l2;
        let s1 = parity(l1);
        let q1 = alpha(l1)
            * (parity(m) * j(-m) - s1 * parity(m) * j(m) - s1 * parity(l2) * j(l2)
                + parity(l2) * j(-l2));
        let mut v = 2.0 * (d.conj() * q1).re;
        if l2 == 0 {
            v -= d.norm_sqr();
        }
        v
    }))
}

/// Projector `P^∞ = e₀e₀ᵀ + wwᵀ`, `w(k) ∝ (−1)^k/k`, `w(0) = 0`.
#[derive(Clone, Debug)]
pub struct ProjectorPinf {
    pub k: usize,
    pub w: Vec<f64>,
}

pub fn build_pinf(k: usize) -> ProjectorPinf {
    let kk = k as i64;
    let mut w: Vec<f64> = (-kk..=kk)
        .map(|l| if l == 0 { 0.0 } else { parity(l) / l as f64 })
        .collect();
    let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        w.iter_mut().for_each(|x| *x /= norm);
    }
    ProjectorPinf { k, w }
}

impl ProjectorPinf {
    pub fn dim(&self) -> usize {
        2 * self.k + 1
    }

    /// `P x` via two inner products.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let k = self.k;
        let wx: Complex64 = self.w.iter().zip(x).map(|(w, x)| x * *w).sum();
        let mut out: Vec<Complex64> = self.w.iter().map(|w| wx * *w).collect();
        out[k] += x[k];
        out
    }

    pub fn dense(&self) -> DMatrix<f64> {
        let dim = self.dim();
        let mut p = DMatrix::from_fn(dim, dim, |i, j| self.w[i] * self.w[j]);
        p[(self.k, self.k)] += 1.0;
        p
    }
}

/// Dense `I − Q_K^∞ + P^∞`.
pub fn dense_operator(k: usize) -> Result<DMatrix<f64>> {
    let dim = 2 * k + 1;
    let q = qk_dense(k)?;
    Ok(DMatrix::identity(dim, dim) - q + build_pinf(k).dense())
}

/// Smallest `L ≥ m` whose prime factors are 2, 3, 5.
pub fn smooth_length(m: usize) -> usize {
    let mut l = m.max(1);
    loop {
        let mut r = l;
        for p in [2, 3, 5] {
            while r.is_multiple_of(p) {
                r /= p;
            }
        }
        if r == 1 {
            return l;
        }
        l += 1;
    }
}

/// Working-set estimate (bytes) of [`AsymptoticOperator`] plus one matvec:
/// two kernel transforms, two transform buffers, the plan scratch and `O(K)` vectors.
pub fn structured_bytes(k: usize) -> u64 {
    let len = smooth_length(4 * k + 1) as u64;
    let dim = (2 * k + 1) as u64;
    (2 + 3) * len * 16 + dim * 12 * 16
}

/// Structured `I − Q_K^∞ + P^∞` of size `2K+1` with `O(K log K)` matvec.
///
/// Stores the FFTs of the two Toeplitz kernels `κ₁, κ₃` (length `L ≥ 4K+1`)
/// plus two `O(K)` diagonal vectors; signs, `β₂ = conj(β₁)` and `|D|²` are
/// recomputed on the fly. Because `κ₁(−m) = κ₃(m)`, the transpose product
/// reuses the same transforms with the kernels swapped. A single forward
/// plan serves both directions (`F⁻¹y = conj(F conj y)`, unnormalized).
pub struct AsymptoticOperator {
    pub k: usize,
    len: usize,
    /// `conj(D(ℓ₁))·α(ℓ₁)`, zero at `ℓ₁ = 0`
    gamma: Vec<Complex64>,
    /// `(−1)^{ℓ₁} J(ℓ₁)`
    beta1: Vec<Complex64>,
    kappa1_hat: Vec<Complex64>,
    kappa3_hat: Vec<Complex64>,
    fft: Arc<dyn Fft<f64>>,
    pinf: ProjectorPinf,
}

impl std::fmt::Debug for AsymptoticOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AsymptoticOperator").field("k", &self.k).field("fft_len", &self.len).finish()
    }
}

/// `|D^∞(ℓ)|²` for `ℓ ≠ 0`, zero at `ℓ = 0`.
fn dsq(l: i64) -> f64 {
    if l == 0 {
        0.0
    } else {
        d_inf(l).norm_sqr()
    }
}

impl AsymptoticOperator {
    pub fn new(k: usize) -> Self {
        let kk = k as i64;
        let dim = 2 * k + 1;
        let len = smooth_length(4 * k + 1);
        let idx = |i: usize| i as i64 - kk;
        let gamma: Vec<Complex64> = (0..dim)
            .map(|i| {
                let l = idx(i);
                if l == 0 {
                    c(0.0)
                } else {
                    d_inf(l).conj() * alpha(l)
                }
            })
            .collect();
        let beta1: Vec<Complex64> = (0..dim).map(|i| parity(idx(i)) * j_integral(idx(i) as f64)).collect();

        let fft = FftPlanner::new().plan_fft_forward(len);
        let mut scratch = vec![c(0.0); fft.get_inplace_scratch_len()];
        // kernel arrays: slot t holds κ(t − 2K) for t ∈ 0..=4K
        let mut k1 = vec![c(0.0); len];
        let mut k3 = vec![c(0.0); len];
        for t in 0..=(4 * k) {
            let m = t as i64 - 2 * kk;
            let jm = j_integral(m as f64);
            k3[t] = parity(m) * jm;
            k1[t] = parity(m) * jm.conj();
        }
        fft.process_with_scratch(&mut k1, &mut scratch);
        fft.process_with_scratch(&mut k3, &mut scratch);
        AsymptoticOperator { k, len, gamma, beta1, kappa1_hat: k1, kappa3_hat: k3, fft, pinf: build_pinf(k) }
    }

    pub fn dim(&self) -> usize {
        2 * self.k + 1
    }

    pub fn fft_len(&self) -> usize {
        self.len
    }

    /// Bytes held by the two kernel transforms.
    pub fn kernel_bytes(&self) -> usize {
        (self.kappa1_hat.len() + self.kappa3_hat.len()) * std::mem::size_of::<Complex64>()
    }

    /// Bytes held by the `O(K)` diagonal and projector vectors.
    pub fn diagonal_bytes(&self) -> usize {
        (self.gamma.len() + self.beta1.len()) * std::mem::size_of::<Complex64>()
            + self.pinf.w.len() * std::mem::size_of::<f64>()
    }

    pub fn projector(&self) -> &ProjectorPinf {
        &self.pinf
    }

    /// `(−1)^{ℓ₁}` at slot `i`.
    fn sign(&self, i: usize) -> f64 {
        parity(i as i64 - self.k as i64)
    }

    /// `β₂(ℓ₁) = (−1)^{ℓ₁} J(−ℓ₁) = conj(β₁(ℓ₁))`.
    fn beta2(&self, i: usize) -> Complex64 {
        self.beta1[i].conj()
    }

    /// Calls `emit(i, κ_a ⋆ x, κ_b ⋆ x)` for every output slot, where `a, b`
    /// are the two stored kernels (swapped when `swap`). Uses two FFT-length
    /// buffers plus the plan scratch.
    fn convolve_pair(&self, x: &[Complex64], swap: bool, mut emit: impl FnMut(usize, Complex64, Complex64)) {
        let k = self.k;
        let len = self.len;
        let mut scratch = vec![c(0.0); self.fft.get_inplace_scratch_len()];
        let mut xh = vec![c(0.0); len];
        xh[..x.len()].copy_from_slice(x);
        self.fft.process_with_scratch(&mut xh, &mut scratch);
        let (ka, kb) = if swap {
            (&self.kappa3_hat, &self.kappa1_hat)
        } else {
            (&self.kappa1_hat, &self.kappa3_hat)
        };
        // inverse transforms as conj ∘ F ∘ conj
        let mut a: Vec<Complex64> = xh.iter().zip(ka).map(|(x, k)| (x * k).conj()).collect();
        self.fft.process_with_scratch(&mut a, &mut scratch);
        xh.iter_mut().zip(kb).for_each(|(x, k)| *x = (*x * k).conj());
        self.fft.process_with_scratch(&mut xh, &mut scratch);
        let scale = 1.0 / len as f64;
        // out[t] = Σ_i κ(t − i − 2K) x_i with x_i = x(ℓ₂ = i − K), so ℓ₁ = t − 3K,
        // i.e. output slot ℓ₁ + K sits at t = (ℓ₁ + K) + 2K; L ≥ 4K+1 avoids wrap-around there
        let off = 2 * k;
        for i in 0..self.dim() {
            let t = (i + off) % len;
            emit(i, a[t].conj() * scale, xh[t].conj() * scale);
        }
    }

    /// `C x` where `Q = C + conj(C) − |D|²e₀-column` off row 0.
    fn apply_c(&self, x: &[Complex64]) -> Vec<Complex64> {
        let s1: Complex64 = self.beta1.iter().zip(x).map(|(b, x)| b * x).sum();
        let s2: Complex64 = self.beta1.iter().zip(x).map(|(b, x)| b.conj() * x).sum();
        let mut out = vec![c(0.0); self.dim()];
        self.convolve_pair(x, false, |i, c1, c3| {
            let sg = self.sign(i);
            out[i] = self.gamma[i] * (c1 - sg * c3 - sg * s1 + s2);
        });
        out
    }

    /// `Cᵀ y`.
    fn apply_c_transpose(&self, y: &[Complex64]) -> Vec<Complex64> {
        let mut z: Vec<Complex64> = self.gamma.iter().zip(y).map(|(g, y)| g * y).collect();
        let t1: Complex64 = z.iter().sum();
        let t2: Complex64 = z.iter().enumerate().map(|(i, z)| -self.sign(i) * z).sum();
        let mut out = vec![c(0.0); self.dim()];
        // Σ_a κ₁(a − b) z_a = Σ_a κ₃(b − a) z_a, and likewise κ₃ ↦ κ₁
        self.convolve_pair(&z, true, |i, c1, _| out[i] = c1);
        for (i, v) in z.iter_mut().enumerate() {
            *v *= -self.sign(i);
        }
        self.convolve_pair(&z, true, |i, _, c3| out[i] += c3);
        for (i, o) in out.iter_mut().enumerate() {
            *o += self.beta1[i] * t2 + self.beta2(i) * t1;
        }
        out
    }

    /// `Q_K^∞ x`.
    pub fn apply_q(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim(), "vector length must be 2K+1");
        let k = self.k;
        let mut out = self.apply_c(x);
        let b = {
            let xc: Vec<Complex64> = x.iter().map(|v| v.conj()).collect();
            self.apply_c(&xc)
        };
        let kk = k as i64;
        for (i, (o, b)) in out.iter_mut().zip(&b).enumerate() {
            *o += b.conj() - x[k] * dsq(i as i64 - kk);
        }
        out[k] = x[k];
        out
    }

    /// `(Q_K^∞)ᵀ y`.
    pub fn apply_q_transpose(&self, y: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(y.len(), self.dim(), "vector length must be 2K+1");
        let k = self.k;
        let mut out = self.apply_c_transpose(y);
        let b = {
            let yc: Vec<Complex64> = y.iter().map(|v| v.conj()).collect();
            self.apply_c_transpose(&yc)
        };
        out.iter_mut().zip(&b).for_each(|(o, b)| *o += b.conj());
        let kk = k as i64;
        let col0: Complex64 = y.iter().enumerate().map(|(i, y)| y * dsq(i as i64 - kk)).sum();
        out[k] += y[k] - col0;
        out
    }

    /// `x − q + P^∞x`, overwriting `q`.
    fn finish(&self, x: &[Complex64], mut q: Vec<Complex64>) -> Vec<Complex64> {
        let w = &self.pinf.w;
        let wx: Complex64 = w.iter().zip(x).map(|(w, x)| x * *w).sum();
        for ((q, x), w) in q.iter_mut().zip(x).zip(w) {
            *q = x - *q + wx * *w;
        }
        q[self.k] += x[self.k];
        q
    }

    /// `(I − Q_K^∞ + P^∞) x`.
    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.finish(x, self.apply_q(x))
    }

    /// `(I − Q_K^∞ + P^∞)ᵀ y` (equal to the adjoint, the matrix being real).
    pub fn matvec_transpose(&self, y: &[Complex64]) -> Vec<Complex64> {
        self.finish(y, self.apply_q_transpose(y))
    }

    /// `M*M x` with `M = I − Q_K^∞ + P^∞`.
    pub fn apply_normal(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.matvec_transpose(&self.matvec(x))
    }
}

/// Geometric sum `Σ_{l=lo}^{hi−1} e^{2πilθ}` for `θ = a/N`.
fn geom(a: i64, nn: i64, lo: i64, hi: i64) -> Complex64 {
    if hi <= lo {
        return c(0.0);
    }
    if a.rem_euclid(nn) == 0 {
        return c((hi - lo) as f64);
    }
    let th = a as f64 / nn as f64;
    let z = cis2pi(th);
    // (z^lo − z^hi)/(1 − z), angles reduced exactly modulo N
    let zl = cis2pi((a * lo).rem_euclid(nn) as f64 / nn as f64);
    let zh = cis2pi((a * hi).rem_euclid(nn) as f64 / nn as f64);
    (zl - zh) / (c(1.0) - z)
}

/// Finite-`n` operator in the Dirichlet basis: entry `(ℓ₁, ℓ₂)` is
/// `[M(D_n(· − ℓ₂/N))](ℓ₁/N)` with `N = 2n+1`, `M = Id − AÃ*` for the single
/// atom at 0 in dimension `n+1`.
///
/// Writing `H = T̃*(p)`, `u = ψ(0)` and `E(θ) = ψ(θ)*u/d`,
/// `M(p)(θ) = E·u*Hψ + conj(E)·ψ*Hu − |E|²·u*Hu`; every term reduces to
/// geometric sums, giving `O(K²n)` work.
pub fn qk_finite_n(k: usize, n: usize) -> Result<DMatrix<f64>> {
    if n < 4 * k {
        return Err(Error::Dimension(format!("finite-n operator needs n ≥ 4K (n = {n}, K = {k})")));
    }
    let kk = k as i64;
    let nn = (2 * n + 1) as i64;
    let d = (n + 1) as i64;
    let ni = n as i64;
    let dim = 2 * k + 1;
    let mut out = DMatrix::zeros(dim, dim);
    for j in 0..dim {
        let b = j as i64 - kk;
        // p_s = e^{−2πisb/N}/N; weights p_s/(d − |s|)
        let ps: Vec<Complex64> = (-ni..=ni)
            .map(|s| cis2pi(-((s * b).rem_euclid(nn)) as f64 / nn as f64) / nn as f64)
            .collect();
        let p0: Complex64 = ps.iter().sum();
        for i in 0..dim {
            let a = i as i64 - kk;
            let e = geom(a, nn, 0, d) / d as f64;
            // u*Hψ = Σ_{k,ℓ} H_{kℓ} e^{−2πiℓθ} and ψ*Hu = Σ_{k,ℓ} e^{2πikθ} H_{kℓ}
            let mut uhpsi = c(0.0);
            let mut psihu = c(0.0);
            for (idx, p) in ps.iter().enumerate() {
                let s = idx as i64 - ni;
                let w = p / (d - s.abs()) as f64;
                // pairs (k, ℓ) = (ℓ + s, ℓ) with 0 ≤ ℓ, ℓ + s < d
                let lo = 0.max(-s);
                let hi = d.min(d - s);
                uhpsi += w * geom(-a, nn, lo, hi);
                psihu += w * geom(a, nn, lo + s, hi + s);
            }
            let v = e * uhpsi + e.conj() * psihu - p0 * e.norm_sqr();
            out[(i, j)] = v.re;
        }
    }
    Ok(out)
}

/// One truncation bound: its formula, threshold, reference `K₁` and the
/// doubling-search result.
#[derive(Clone, Debug, Serialize)]
pub struct BudgetEntry {
    pub name: &'static str,
    pub threshold: f64,
    pub reference_k1: f64,
    pub bound_at_reference: f64,
    /// Smallest power of two meeting the threshold.
    pub found_k1: f64,
    pub feasible: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BudgetReport {
    pub k_target: f64,
    pub c1: f64,
    pub entries: Vec<BudgetEntry>,
    /// Largest `K₁` required, `≤ K_target` when the plan is feasible.
    pub k1_required: f64,
    pub feasible: bool,
}

/// A tail bound as a function of `(K₁, K_target, C₁)`.
pub type TailBound = fn(f64, f64, f64) -> f64;

/// The tail bounds as `(name, threshold, reference K₁, bound)`.
pub fn truncation_bounds() -> Vec<(&'static str, f64, f64, TailBound)> {
    fn b1(k1: f64, k: f64, c1: f64) -> f64 {
        4.0 * (PI * PI / 6.0).sqrt() / (PI.powi(3) * k1 * k1) * 100.0 * (c1 + c1 * k.ln())
    }
    fn b2(k1: f64, k: f64, c1: f64) -> f64 {
        16.0 / (PI.powi(3) * k1 * k1) * (c1 + c1 * k.ln()) * 100.0
    }
    fn b2b(k1: f64, k: f64, c1: f64) -> f64 {
        16.0 * (c1 + 3.0 * c1 * k.ln()) * (6.0 * k.ln() + 3.5) * 100.0 / (PI * PI * k1 * k1)
    }
    fn b3(k1: f64, _: f64, _: f64) -> f64 {
        8.5e4 / k1
    }
    fn b4(k1: f64, _: f64, _: f64) -> f64 {
        1.35e5 / k1
    }
    fn b5(k1: f64, _: f64, _: f64) -> f64 {
        7.54e9 / k1
    }
    fn b6(k1: f64, _: f64, _: f64) -> f64 {
        1.46e9 / k1
    }
    vec![
        ("B1", 1e-4, 1e6, b1 as TailBound),
        ("B2", 1e-2, 1e6, b2),
        ("B2b", 1e-2, 1e6, b2b),
        ("B3", 1e-2, 1e7, b3),
        ("B4", 2e-2, 1e7, b4),
        ("B5", 0.1, 7.54e10, b5),
        ("B6", 0.1, 1.46e10, b6),
    ]
}

/// Minimal `K₁` (doubling search from 1) meeting each tail-bound threshold,
/// thresholds multiplied by `tol_scale` (`∞` makes every bound vacuous).
pub fn truncation_budget(k_target: f64, tol_scale: f64) -> BudgetReport {
    let c1 = 2500.0;
    let mut entries = Vec::new();
    for (name, thr, reference, f) in truncation_bounds() {
        let t = thr * tol_scale;
        let mut k1 = 1.0f64;
        while f(k1, k_target, c1) > t && k1 < 1e300 {
            k1 *= 2.0;
        }
        entries.push(BudgetEntry {
            name,
            threshold: thr,
            reference_k1: reference,
            bound_at_reference: f(reference, k_target, c1),
            found_k1: k1,
            feasible: k1 <= k_target,
        });
    }
    let k1_required = entries.iter().map(|e| e.found_k1).fold(1.0, f64::max);
    BudgetReport { k_target, c1, entries, k1_required, feasible: k1_required <= k_target }
}
