//! Trigonometric polynomials on the torus [0, 1) and Dirichlet kernels.
//!
//! A [`TrigPoly`] of order `n` is `p(θ) = Σ_{|k|≤n} c_k e^{2πikθ}`, with the
//! coefficients stored densely in increasing `k`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const TWO_PI: f64 = 2.0 * PI;

/// Reduce `θ` modulo 1 into `[-1/2, 1/2)`.
#[inline]
pub fn wrap_half(theta: f64) -> f64 {
    let t = theta - theta.round();
    if t >= 0.5 {
        t - 1.0
    } else {
        t
    }
}

/// Wrap-around distance on the torus.
#[inline]
pub fn torus_dist(a: f64, b: f64) -> f64 {
    wrap_half(a - b).abs()
}

/// `e^{2πiθ}` with the argument reduced first.
#[inline]
pub fn cis2pi(theta: f64) -> Complex64 {
    let t = wrap_half(theta);
    Complex64::from_polar(1.0, TWO_PI * t)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigPoly {
    n: usize,
    coeffs: Vec<Complex64>,
}

impl TrigPoly {
    pub fn zeros(n: usize) -> Self {
        TrigPoly { n, coeffs: vec![Complex64::new(0.0, 0.0); 2 * n + 1] }
    }

    pub fn constant(n: usize, c: Complex64) -> Self {
        let mut p = Self::zeros(n);
        p.coeffs[n] = c;
        p
    }

    /// Build from coefficients `c_{-n..=n}`; the length must be odd.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() % 2 != 1 {
            return Err(Error::Dimension(format!(
                "coefficient vector has even length {}",
                coeffs.len()
            )));
        }
        let n = coeffs.len() / 2;
        Ok(TrigPoly { n, coeffs })
    }

    /// Build from `f(k)` for `k = -n..=n`.
    pub fn from_fn(n: usize, f: impl Fn(i64) -> Complex64) -> Self {
        let ni = n as i64;
        TrigPoly { n, coeffs: (-ni..=ni).map(f).collect() }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// `c_k`, zero outside `|k| ≤ n`.
    pub fn coeff(&self, k: i64) -> Complex64 {
        let n = self.n as i64;
        if k.abs() > n {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(k + n) as usize]
        }
    }

    pub fn set_coeff(&mut self, k: i64, v: Complex64) {
        let n = self.n as i64;
        assert!(k.abs() <= n, "coefficient index {k} outside order {n}");
        self.coeffs[(k + n) as usize] = v;
    }

    /// Zero-pad (or exactly keep) to a larger order.
    pub fn padded(&self, m: usize) -> Self {
        assert!(m >= self.n, "cannot pad order {} down to {}", self.n, m);
        let mut out = Self::zeros(m);
        let off = m - self.n;
        out.coeffs[off..off + self.coeffs.len()].copy_from_slice(&self.coeffs);
        out
    }

    /// Evaluate at `θ`.
    pub fn eval(&self, theta: f64) -> Complex64 {
        self.eval_deriv(theta, 0)
    }

    /// Evaluate the `order`-th derivative at `θ`.
    pub fn eval_deriv(&self, theta: f64, order: u32) -> Complex64 {
        let t = wrap_half(theta);
        let z = Complex64::from_polar(1.0, TWO_PI * t);
        let n = self.n as i64;
        // Horner in z on the shifted polynomial, then undo the shift.
        let mut acc = Complex64::new(0.0, 0.0);
        for (idx, c) in self.coeffs.iter().enumerate().rev() {
            let k = idx as i64 - n;
            let w = if order == 0 {
                *c
            } else {
                *c * Complex64::new(0.0, TWO_PI * k as f64).powu(order)
            };
            acc = acc * z + w;
        }
        acc * Complex64::from_polar(1.0, -TWO_PI * t * n as f64)
    }

    pub fn norm1(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn norm2(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, a: Complex64) -> Self {
        TrigPoly { n: self.n, coeffs: self.coeffs.iter().map(|c| c * a).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let m = self.n.max(other.n);
        let mut out = self.padded(m);
        let o = other.padded(m);
        for (a, b) in out.coeffs.iter_mut().zip(&o.coeffs) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Product polynomial (order n₁+n₂) by direct convolution.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.n + other.n);
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    /// `|p(θ)|²` as a polynomial of order 2n: coefficient `s` is `Σ_k c_k conj(c_{k-s})`.
    pub fn abs_sq(&self) -> Self {
        self.mul(&self.conj_poly())
    }

    /// The polynomial `conj(p(θ))`, i.e. coefficients `conj(c_{-k})`.
    pub fn conj_poly(&self) -> Self {
        TrigPoly { n: self.n, coeffs: self.coeffs.iter().rev().map(|c| c.conj()).collect() }
    }

    /// `θ ↦ p(-θ)`.
    pub fn reflect(&self) -> Self {
        TrigPoly { n: self.n, coeffs: self.coeffs.iter().rev().copied().collect() }
    }

    /// Max coefficient deviation between two polynomials (orders may differ).
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let m = self.n.max(other.n) as i64;
        (-m..=m).map(|k| (self.coeff(k) - other.coeff(k)).norm()).fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `(1/(2n+1)) Σ_{|k|≤n} e^{2πikθ}`.
    Centered,
    /// `(1/(n+1)) Σ_{k=0}^{n} e^{2πikθ}`.
    OneSided,
}

/// Number of Taylor terms kept near the origin.
const TAYLOR_TERMS: usize = 32;

#[derive(Clone, Debug)]
pub struct DirichletSpec {
    pub n: usize,
    pub normalization: Normalization,
    /// Normalized even moments `(1/N) Σ_{|k|≤n} (k/n)^{2j}`.
    moments: Vec<f64>,
}

impl DirichletSpec {
    pub fn centered(n: usize) -> Self {
        let big_n = (2 * n + 1) as f64;
        let moments = (0..TAYLOR_TERMS)
            .map(|j| {
                if n == 0 {
                    return if j == 0 { 1.0 } else { 0.0 };
                }
                let s: f64 = (1..=n).map(|k| (k as f64 / n as f64).powi(2 * j as i32)).sum();
                if j == 0 {
                    1.0
                } else {
                    2.0 * s / big_n
                }
            })
            .collect();
        DirichletSpec { n, normalization: Normalization::Centered, moments }
    }

    pub fn one_sided(n: usize) -> Self {
        DirichletSpec { n, normalization: Normalization::OneSided, moments: Vec::new() }
    }

    /// Number of terms `N` (2n+1 or n+1).
    pub fn terms(&self) -> usize {
        match self.normalization {
            Normalization::Centered => 2 * self.n + 1,
            Normalization::OneSided => self.n + 1,
        }
    }

    /// Radius below which derivatives use the series at the origin.
    pub fn switch_radius(&self) -> f64 {
        0.25 / self.n.max(1) as f64
    }

    /// Kernel value at `θ`.
    pub fn eval(&self, theta: f64) -> Complex64 {
        let t = wrap_half(theta);
        let m = self.terms() as f64;
        let s = (PI * t).sin();
        let ratio = if s == 0.0 { 1.0 } else { (m * PI * t).sin() / (m * s) };
        match self.normalization {
            Normalization::Centered => Complex64::new(ratio, 0.0),
            Normalization::OneSided => Complex64::from_polar(ratio, PI * self.n as f64 * t),
        }
    }

    /// Derivative of order 0..=3 of the centered kernel (real-valued).
    ///
    /// Closed form from the Leibniz rule on `sin(Nπθ)·(1/sin πθ)/N`; inside
    /// `|θ| < switch_radius()` the even-moment series is used instead.
    pub fn deriv(&self, theta: f64, order: u32) -> f64 {
        assert_eq!(
            self.normalization,
            Normalization::Centered,
            "derivatives are provided for the centered kernel"
        );
        assert!(order <= 3, "derivative order {order} not supported");
        if self.n == 0 {
            return if order == 0 { 1.0 } else { 0.0 };
        }
        let t = wrap_half(theta);
        if t.abs() < self.switch_radius() {
            return self.deriv_series(t, order);
        }
        let big_n = (2 * self.n + 1) as f64;
        let a = big_n * PI;
        let (sf, cf) = (a * t).sin_cos();
        let (s, c) = (PI * t).sin_cos();
        // f = sin(Nπθ) and its derivatives
        let f = [sf, a * cf, -a * a * sf, -a * a * a * cf];
        // r = 1/sin(πθ) and its derivatives
        let r = [
            1.0 / s,
            -PI * c / (s * s),
            PI * PI * (1.0 + c * c) / (s * s * s),
            -PI * PI * PI * c * (5.0 + c * c) / (s * s * s * s),
        ];
        const BINOM: [[f64; 4]; 4] =
            [[1.0, 0.0, 0.0, 0.0], [1.0, 1.0, 0.0, 0.0], [1.0, 2.0, 1.0, 0.0], [1.0, 3.0, 3.0, 1.0]];
        let k = order as usize;
        let mut acc = 0.0;
        for j in 0..=k {
            acc += BINOM[k][j] * f[j] * r[k - j];
        }
        acc / big_n
    }

    fn deriv_series(&self, t: f64, order: u32) -> f64 {
        let w = 2.0 * PI * self.n as f64;
        let x = w * t;
        let k = order as usize;
        let mut acc = 0.0;
        for (j, m) in self.moments.iter().enumerate() {
            let p = 2 * j;
            if p < k {
                continue;
            }
            let e = p - k;
            // x^e / e!
            let mut term = 1.0;
            for i in 1..=e {
                term *= x / i as f64;
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * m * term;
        }
        acc * w.powi(order as i32)
    }

    /// `D''(0) = -4π² n(n+1)/3` for the centered kernel.
    pub fn second_deriv_at_zero(&self) -> f64 {
        let n = self.n as f64;
        -4.0 * PI * PI * n * (n + 1.0) / 3.0
    }

    /// Coefficients of `D(θ - τ)` as a trigonometric polynomial.
    pub fn shifted_poly(&self, tau: f64) -> TrigPoly {
        let m = self.terms() as f64;
        match self.normalization {
            Normalization::Centered => {
                TrigPoly::from_fn(self.n, |k| cis2pi(-(k as f64) * tau) / m)
            }
            Normalization::OneSided => TrigPoly::from_fn(self.n, |k| {
                if k < 0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    cis2pi(-(k as f64) * tau) / m
                }
            }),
        }
    }
}

/// Convenience: order-th derivative of the centered kernel of cutoff `n`.
pub fn dirichlet_deriv(spec: &DirichletSpec, theta: f64, order: u32) -> f64 {
    spec.deriv(theta, order)
}

/// Split `p = p_K + p_K_err` on the Dirichlet interpolation basis
/// `{D(θ - k/(2n+1))}_{|k|≤n}`, keeping the `|k| ≤ K` part in `p_K`.
pub fn dirichlet_truncate(p: &TrigPoly, k_keep: usize) -> Result<(TrigPoly, TrigPoly)> {
    let n = p.order();
    if k_keep > n {
        return Err(Error::DomainError(format!("truncation K={k_keep} exceeds order {n}")));
    }
    let big_n = (2 * n + 1) as f64;
    let kk = k_keep as i64;
    let samples: Vec<(f64, Complex64)> = (-kk..=kk)
        .map(|k| {
            let x = k as f64 / big_n;
            (x, p.eval(x))
        })
        .collect();
    let p_k = TrigPoly::from_fn(n, |s| {
        samples.iter().map(|(x, v)| v * cis2pi(-(s as f64) * x)).sum::<Complex64>() / big_n
    });
    let err = p.sub(&p_k);
    Ok((p_k, err))
}
