//! Independent numerical oracles shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;

/// Gauss–Legendre nodes and weights on [−1, 1] by Newton iteration on P_m.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = m as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                let (mut q0, mut q1) = (1.0, z);
                for k in 2..=m {
                    let q2 = ((2 * k - 1) as f64 * z * q1 - (k - 1) as f64 * q0) / k as f64;
                    q0 = q1;
                    q1 = q2;
                }
                let dq = m as f64 * (z * q1 - q0) / (z * z - 1.0);
                x[i] = z;
                w[i] = 2.0 / ((1.0 - z * z) * dq * dq);
                break;
            }
        }
    }
    (x, w)
}

/// Composite Gauss–Legendre on `[a, b]` with `panels` equal panels of `m` nodes.
pub fn composite_gl<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, panels: usize, m: usize) -> Complex64 {
    let (x, w) = gauss_legendre(m);
    let h = (b - a) / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for (xi, wi) in x.iter().zip(&w) {
            acc += f(lo + 0.5 * h * (xi + 1.0)) * (0.5 * h * wi);
        }
    }
    acc
}

/// Direct sum Σ_{|k|≤n} e^{2πikθ}/(2n+1).
pub fn dirichlet_direct(n: usize, theta: f64) -> Complex64 {
    let n = n as i64;
    (-n..=n)
        .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 * theta))
        .sum::<Complex64>()
        / (2 * n + 1) as f64
}

pub fn max_abs(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `D^∞(ℓ)`: 1 at 0, `2i/(πℓ)` for odd `ℓ`, 0 for even `ℓ ≠ 0`.
pub fn d_inf_closed_form(l: i64) -> Complex64 {
    if l == 0 {
        Complex64::new(1.0, 0.0)
    } else if l % 2 == 0 {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::new(0.0, 2.0 / (std::f64::consts::PI * l as f64))
    }
}

/// `Q₁(a, b) = ½∫_{−1}^{1} e^{−iπbx} G_a(x)/(1 − |x|) dx`, split at 0.
pub fn q1_quadrature(a: i64, b: i64) -> Complex64 {
    use std::f64::consts::PI;
    let i = Complex64::i();
    let g = move |x: f64| -> Complex64 {
        if a == 0 {
            return Complex64::new(1.0 - x.abs(), 0.0);
        }
        let ia = i * PI * a as f64;
        if x >= 0.0 {
            (ia.exp() - (ia * x).exp()) / ia
        } else {
            ((ia * (1.0 + x)).exp() - 1.0) / ia
        }
    };
    let f = move |x: f64| (-i * PI * b as f64 * x).exp() * g(x) / (1.0 - x.abs());
    0.5 * (composite_gl(f, -1.0, 0.0, 60, 20) + composite_gl(f, 0.0, 1.0, 60, 20))
}

/// `2Re(conj(D)Q₁) − |D|²δ_{b0}` assembled from the oracle pieces.
pub fn q_entry_oracle(a: i64, b: i64) -> f64 {
    let d = d_inf_closed_form(a);
    let v = 2.0 * (d.conj() * q1_quadrature(a, b)).re;
    if b == 0 { v - d.norm_sqr() } else { v }
}
