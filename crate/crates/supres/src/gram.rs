//! Gram-matrix calculus for trigonometric polynomials.
//!
//! Matrices are indexed by frequencies `0..d`, with canonical vector
//! `ψ(θ)_k = e^{−2πikθ}`, so that `ψ(θ)*Hψ(θ) = T(H)(θ)` where `T` sums the
//! diagonals: `T(H)_s = Σ_{k−ℓ=s} H_{kℓ}`. A Gram matrix of dimension `d`
//! represents a polynomial of order `d − 1`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::certificate::{AtomicMeasure, Certificate};
use crate::trigpoly::{cis2pi, TrigPoly};
use crate::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

#[inline]
fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `ψ(θ)_k = e^{−2πikθ}`, `k = 0..d`.
pub fn psi(theta: f64, d: usize) -> DVector<Complex64> {
    DVector::from_fn(d, |k, _| cis2pi(-(k as f64) * theta))
}

/// Diagonal sums: `T(H)_s = Σ_{k−ℓ=s} H_{kℓ}`.
pub fn op_t(h: &CMatrix) -> TrigPoly {
    let d = h.nrows();
    assert_eq!(d, h.ncols(), "Gram matrix must be square");
    assert!(d > 0, "empty Gram matrix");
    let n = d as i64 - 1;
    TrigPoly::from_fn(d - 1, |s| {
        let mut acc = c(0.0);
        for l in 0..d as i64 {
            let k = l + s;
            if (0..=n).contains(&k) {
                acc += h[(k as usize, l as usize)];
            }
        }
        acc
    })
}

/// Adjoint of [`op_t`]: `T*(q)_{kℓ} = q_{k−ℓ}`.
pub fn op_t_star(q: &TrigPoly, d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |k, l| q.coeff(k as i64 - l as i64))
}

/// Diagonal weights `1/(d − |s|)`.
pub fn w_weight(d: usize, s: i64) -> f64 {
    1.0 / (d as f64 - s.abs() as f64)
}

/// `T̃*(p)_{kℓ} = p_{k−ℓ}/(d − |k−ℓ|)` with `d = order(p) + 1`; a right inverse of `T`.
pub fn op_ttilde_star(p: &TrigPoly) -> CMatrix {
    let d = p.order() + 1;
    CMatrix::from_fn(d, d, |k, l| {
        let s = k as i64 - l as i64;
        p.coeff(s) * w_weight(d, s)
    })
}

/// `‖p‖_W = √(Σ |p_s|²/(d − |s|))`, `d = order + 1`.
pub fn norm_w(p: &TrigPoly) -> f64 {
    let d = p.order() + 1;
    let n = p.order() as i64;
    (-n..=n).map(|s| p.coeff(s).norm_sqr() * w_weight(d, s)).sum::<f64>().sqrt()
}

/// Orthogonal projector onto the complement of `span{ψ(τ_j)}` in `C^d`.
#[derive(Clone, Debug)]
pub struct Projector {
    pub d: usize,
    /// `P = I − U(U*U)⁻¹U*`
    pub p: CMatrix,
    /// Orthonormal basis of `span{ψ(τ_j)}` (d × |S|).
    pub v: CMatrix,
    pub positions: Vec<f64>,
}

/// Build `P_U^⊥` for atoms at `positions` in dimension `d`.
pub fn projector_puperp(positions: &[f64], d: usize) -> Result<Projector> {
    let s = positions.len();
    if s == 0 {
        return Ok(Projector {
            d,
            p: CMatrix::identity(d, d),
            v: CMatrix::zeros(d, 0),
            positions: Vec::new(),
        });
    }
    if s > d {
        return Err(Error::SingularGram { rcond: 0.0 });
    }
    let u = CMatrix::from_fn(d, s, |k, j| cis2pi(-(k as f64) * positions[j]));
    let uu = u.adjoint() * &u;
    let eig = SymmetricEigen::new(uu);
    let lmax = eig.eigenvalues.max();
    let lmin = eig.eigenvalues.min();
    let rcond = lmin / lmax;
    if !(rcond > 1e-13) {
        return Err(Error::SingularGram { rcond });
    }
    // V = U (U*U)^{-1/2}
    let inv_sqrt = DVector::from_iterator(s, eig.eigenvalues.iter().map(|l| c(1.0 / l.sqrt())));
    let q = &eig.eigenvectors;
    let half = q * CMatrix::from_diagonal(&inv_sqrt) * q.adjoint();
    let v = &u * half;
    let p = CMatrix::identity(d, d) - &v * v.adjoint();
    Ok(Projector { d, p, v, positions: positions.to_vec() })
}

impl Projector {
    /// `A(X) = T(P X P)`.
    pub fn op_a(&self, x: &CMatrix) -> TrigPoly {
        op_t(&(&self.p * x * &self.p))
    }

    /// `A*(q) = P T*(q) P`.
    pub fn op_a_star(&self, q: &TrigPoly) -> CMatrix {
        &self.p * op_t_star(q, self.d) * &self.p
    }

    /// `Ã*(p) = P T̃*(p) P`.
    pub fn op_atilde_star(&self, p: &TrigPoly) -> CMatrix {
        assert_eq!(p.order() + 1, self.d, "polynomial order must be d − 1");
        &self.p * op_ttilde_star(p) * &self.p
    }

    /// Dense matrix of `AA*` on coefficient vectors indexed `s = −(d−1)..=d−1`.
    ///
    /// Uses `P E_s P = E_s − R E_s − E_s R + R E_s R` with `R = VV*` and the
    /// low-rank form of the last term, `O(d³ + d²|S|²)` overall.
    pub fn aa_star_dense(&self) -> CMatrix {
        let d = self.d as i64;
        let m = (2 * d - 1) as usize;
        let r = &self.v * self.v.adjoint();
        let ns = self.v.ncols();
        // corr_ij(t) = Σ_ℓ V_{ℓ+t,i} conj(V_{ℓ,j})
        let mut corr = vec![c(0.0); ns * ns * m];
        for i in 0..ns {
            for j in 0..ns {
                for t in -(d - 1)..d {
                    let mut acc = c(0.0);
                    for l in 0.max(-t)..d.min(d - t) {
                        acc += self.v[((l + t) as usize, i)] * self.v[(l as usize, j)].conj();
                    }
                    corr[(i * ns + j) * m + (t + d - 1) as usize] = acc;
                }
            }
        }
        let mut out = CMatrix::zeros(m, m);
        for si in 0..m {
            let s = si as i64 - (d - 1);
            for ri in 0..m {
                let rr = ri as i64 - (d - 1);
                let mut v = if rr == s { c((d - s.abs()) as f64) } else { c(0.0) };
                // T_r(R E_s) = Σ_ℓ R_{ℓ+r, ℓ+s}
                let lo = 0.max(-rr).max(-s);
                let hi = d.min(d - rr).min(d - s);
                for l in lo..hi {
                    v -= r[((l + rr) as usize, (l + s) as usize)];
                }
                // T_r(E_s R) = Σ_ℓ R_{ℓ+r−s, ℓ}
                let lo = 0.max(-rr).max(s - rr);
                let hi = d.min(d - rr).min(d - rr + s);
                for l in lo..hi {
                    v -= r[((l + rr - s) as usize, l as usize)];
                }
                for ij in 0..ns * ns {
                    v += corr[ij * m + si].conj() * corr[ij * m + ri];
                }
                out[(ri, si)] = v;
            }
        }
        out
    }

    /// Coefficient vectors spanning the null space of `AA*`:
    /// evaluation at `τ_j` and derivative evaluation at `τ_j`.
    pub fn null_vectors(&self) -> Vec<DVector<Complex64>> {
        let d = self.d as i64;
        let m = (2 * d - 1) as usize;
        let mut out = Vec::new();
        for &tau in &self.positions {
            out.push(DVector::from_fn(m, |i, _| {
                let s = i as i64 - (d - 1);
                cis2pi(-(s as f64) * tau)
            }));
            out.push(DVector::from_fn(m, |i, _| {
                let s = i as i64 - (d - 1);
                cis2pi(-(s as f64) * tau) * Complex64::new(0.0, -(s as f64))
            }));
        }
        out
    }

    /// `G = W^{1/2} AA* W^{1/2}`, similar to `AÃ* = AA*W`.
    pub fn weighted_normal_matrix(&self) -> CMatrix {
        let d = self.d as i64;
        let m = (2 * d - 1) as usize;
        let w: Vec<f64> =
            (0..m).map(|i| w_weight(self.d, i as i64 - (d - 1)).sqrt()).collect();
        let mut g = self.aa_star_dense();
        for i in 0..m {
            for j in 0..m {
                g[(i, j)] *= w[i] * w[j];
            }
        }
        // symmetrize rounding
        (&g + g.adjoint()) * c(0.5)
    }

    /// Smallest eigenvalue of `AÃ*` over the range of `A`.
    pub fn lambda_min_aatilde(&self) -> LambdaReport {
        let g = self.weighted_normal_matrix();
        let mut ev: Vec<f64> = SymmetricEigen::new(g).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        let lmax = *ev.last().unwrap_or(&0.0);
        let tol = 1e-9 * lmax.max(1.0);
        let null_dim = ev.iter().filter(|&&l| l.abs() <= tol).count();
        let lambda_min = ev.iter().copied().find(|&l| l > tol).unwrap_or(0.0);
        LambdaReport {
            lambda_min,
            lambda_max: lmax,
            null_dim,
            expected_null_dim: 2 * self.positions.len(),
        }
    }

    /// Minimum-Frobenius-norm `X` with `A(X) = target`.
    ///
    /// Solves `G u = W^{1/2} target` spectrally on the range of `G`, then
    /// `X = A*(W^{1/2} u)`; directions with eigenvalue below `1e−9·λ_max`
    /// are treated as the structural null space.
    pub fn x_corr(&self, target: &TrigPoly) -> Result<XCorr> {
        let d = self.d as i64;
        let m = (2 * d - 1) as usize;
        if target.order() + 1 > self.d {
            return Err(Error::Dimension(format!(
                "target order {} exceeds Gram dimension {}",
                target.order(),
                self.d
            )));
        }
        let t = target.padded(self.d - 1);
        let wsq: Vec<f64> = (0..m).map(|i| w_weight(self.d, i as i64 - (d - 1)).sqrt()).collect();
        let g = self.weighted_normal_matrix();
        let eig = SymmetricEigen::new(g);
        let lmax = eig.eigenvalues.max();
        let tol = 1e-9 * lmax.max(1.0);
        let lmin_range = eig
            .eigenvalues
            .iter()
            .copied()
            .filter(|&l| l > tol)
            .fold(f64::INFINITY, f64::min);
        let cond = lmax / lmin_range;
        if !(cond <= 1e12) {
            return Err(Error::IllConditioned { cond });
        }
        let rhs = DVector::from_fn(m, |i, _| t.coeffs()[i] * wsq[i]);
        let q = &eig.eigenvectors;
        let proj = q.adjoint() * &rhs;
        let scaled = DVector::from_fn(m, |i, _| {
            let l = eig.eigenvalues[i];
            if l > tol {
                proj[i] / l
            } else {
                c(0.0)
            }
        });
        let u = q * scaled;
        let y = TrigPoly::from_coeffs((0..m).map(|i| u[i] * wsq[i]).collect())?;
        let x = self.op_a_star(&y);
        let x = (&x + x.adjoint()) * c(0.5);
        let back = self.op_a(&x);
        let residual = back.sub(&t).norm2();
        let frob = x.norm();
        let wnorm = norm_w(&t);
        Ok(XCorr {
            x,
            residual,
            residual_rel: if t.norm2() > 0.0 { residual / t.norm2() } else { residual },
            frobenius: frob,
            lambda_min: lmin_range,
            frobenius_bound: if lmin_range.is_finite() { wnorm / lmin_range.sqrt() } else { 0.0 },
            condition: if cond.is_finite() { cond } else { 0.0 },
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LambdaReport {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub null_dim: usize,
    pub expected_null_dim: usize,
}

#[derive(Clone, Debug)]
pub struct XCorr {
    pub x: CMatrix,
    /// `‖A(X) − target‖₂`
    pub residual: f64,
    pub residual_rel: f64,
    pub frobenius: f64,
    /// `λ_min` of `AÃ*` on the range of `A`
    pub lambda_min: f64,
    /// `λ_min^{−1/2}·‖target‖_W`
    pub frobenius_bound: f64,
    pub condition: f64,
}

/// Gram dimension used for certificates of cutoff `n`: `2n + 1`.
pub fn certificate_dim(n: usize) -> usize {
    2 * n + 1
}

/// `λ_min(AÃ*)` (over the range of `A`) for the atoms of `m` in dimension `d`.
pub fn lambda_min_aatilde(m: &AtomicMeasure, d: usize) -> Result<LambdaReport> {
    Ok(projector_puperp(&m.positions(), d)?.lambda_min_aatilde())
}

/// `q_U^⊥(θ) = ψ*P ψ/d` as a polynomial.
pub fn q_perp(p: &Projector) -> TrigPoly {
    op_t(&p.p).scale(c(1.0 / p.d as f64))
}

/// `p_err = (1 − |η|²) − q_U^⊥`, order `2n`.
pub fn p_err(cert: &Certificate) -> Result<(TrigPoly, Projector)> {
    let d = certificate_dim(cert.n);
    let proj = projector_puperp(&cert.measure.positions(), d)?;
    let eta2 = cert.eta_poly().abs_sq();
    let one = TrigPoly::constant(2 * cert.n, c(1.0));
    let perr = one.sub(&eta2).sub(&q_perp(&proj));
    Ok((perr, proj))
}

#[derive(Clone, Debug)]
pub struct GramReport {
    pub gram: CMatrix,
    pub min_eig: f64,
    pub max_eig: f64,
    /// Eigenvalues below `1e−8·‖Q‖₂`.
    pub rank_deficiency: usize,
    /// `sup_grid |ψ*Qψ − (1 − |η|²)|` on `10(2n+1)` points.
    pub sup_poly_err: f64,
    /// `max_j ‖Q ψ(τ_j)‖`
    pub atom_kernel_residual: f64,
    pub p_err_norm_w: f64,
    pub x_corr: XCorr,
}

#[derive(Clone, Debug, Serialize)]
pub struct GramSummary {
    pub dim: usize,
    pub min_eig: f64,
    pub max_eig: f64,
    pub rank_deficiency: usize,
    pub sup_poly_err: f64,
    pub atom_kernel_residual: f64,
    pub p_err_norm_w: f64,
    pub x_corr_frobenius: f64,
    pub x_corr_frobenius_bound: f64,
    pub x_corr_residual: f64,
    pub lambda_min_aatilde: f64,
    pub psd: bool,
}

impl GramReport {
    pub fn summary(&self) -> GramSummary {
        GramSummary {
            dim: self.gram.nrows(),
            min_eig: self.min_eig,
            max_eig: self.max_eig,
            rank_deficiency: self.rank_deficiency,
            sup_poly_err: self.sup_poly_err,
            atom_kernel_residual: self.atom_kernel_residual,
            p_err_norm_w: self.p_err_norm_w,
            x_corr_frobenius: self.x_corr.frobenius,
            x_corr_frobenius_bound: self.x_corr.frobenius_bound,
            x_corr_residual: self.x_corr.residual,
            lambda_min_aatilde: self.x_corr.lambda_min,
            psd: self.min_eig >= -1e-9,
        }
    }
}

/// `Q = P/d + X_corr` and its checks.
pub fn assemble_and_verify(cert: &Certificate) -> Result<GramReport> {
    let (perr, proj) = p_err(cert)?;
    let xc = proj.x_corr(&perr)?;
    let d = proj.d;
    let q = &proj.p * c(1.0 / d as f64) + &xc.x;
    let q = (&q + q.adjoint()) * c(0.5);
    let eig = SymmetricEigen::new(q.clone());
    let min_eig = eig.eigenvalues.min();
    let max_eig = eig.eigenvalues.max();
    let norm2 = eig.eigenvalues.iter().fold(0.0f64, |a, l| a.max(l.abs()));
    let rank_deficiency = eig.eigenvalues.iter().filter(|&&l| l < 1e-8 * norm2).count();

    let tq = op_t(&q);
    let eta = cert.eta_poly();
    let grid = 10 * (2 * cert.n + 1);
    let sup_poly_err = (0..grid)
        .map(|i| {
            let th = i as f64 / grid as f64;
            let lhs = tq.eval(th);
            let rhs = 1.0 - eta.eval(th).norm_sqr();
            (lhs - rhs).norm()
        })
        .fold(0.0, f64::max);
    let atom_kernel_residual = proj
        .positions
        .iter()
        .map(|&t| (&q * psi(t, d)).norm())
        .fold(0.0, f64::max);
    Ok(GramReport {
        gram: q,
        min_eig,
        max_eig,
        rank_deficiency,
        sup_poly_err,
        atom_kernel_residual,
        p_err_norm_w: norm_w(&perr),
        x_corr: xc,
    })
}

/// `K_p(τ, θ) = ψ(θ)* T̃*(p) ψ(τ)`.
pub fn kernel_kp(p: &TrigPoly, tau: f64, theta: f64) -> Complex64 {
    let d = p.order() + 1;
    let n = d as i64;
    // Σ_{k,ℓ} e^{2πikθ} p_{k−ℓ}/(d−|k−ℓ|) e^{−2πiℓτ}, grouped by s = k − ℓ
    let mut acc = c(0.0);
    for s in -(n - 1)..n {
        let ps = p.coeff(s);
        if ps == c(0.0) {
            continue;
        }
        let mut inner = c(0.0);
        for l in 0.max(-s)..n.min(n - s) {
            let k = l + s;
            inner += cis2pi(k as f64 * theta - l as f64 * tau);
        }
        acc += ps * w_weight(d, s) * inner;
    }
    acc
}
