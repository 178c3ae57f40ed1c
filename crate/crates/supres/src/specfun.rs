//! Sine/cosine integrals, `Γ(0, ix)`, and the real Lambert W branches.

use std::f64::consts::{E, FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Below this argument power series are used, above it the continued fraction for E₁(ix).
const SERIES_MAX: f64 = 2.0;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SpecialValue {
    pub value: Complex64,
    pub est_abs_err: f64,
}

/// `E₁(ix)` for `x > SERIES_MAX` by modified Lentz on the continued fraction.
fn e1_imag_cf(x: f64) -> Complex64 {
    const TINY: f64 = 1e-300;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 2..100_000 {
        let a = -((i - 1) as f64).powi(2);
        b += 2.0;
        d = (d * a + b).inv();
        c = b + c.inv() * a;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    h * Complex64::new(x.cos(), -x.sin())
}

/// `(Si(x), Ci(x))` for `x > 0`.
pub fn sici(x: f64) -> (f64, f64) {
    debug_assert!(x > 0.0);
    if x <= SERIES_MAX {
        (si_series(x), EULER_GAMMA + x.ln() - cin_series(x))
    } else {
        let h = e1_imag_cf(x);
        (FRAC_PI_2 + h.im, -h.re)
    }
}

fn si_series(x: f64) -> f64 {
    // Σ (-1)^k x^{2k+1} / ((2k+1)(2k+1)!)
    let x2 = x * x;
    let mut term = x; // x^{2k+1}/(2k+1)!
    let mut sum = x;
    for k in 1..60 {
        let m = (2 * k) as f64;
        term *= -x2 / (m * (m + 1.0));
        let add = term / (m + 1.0);
        sum += add;
        if add.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// `Cin(x) = ∫₀ˣ (1 − cos t)/t dt` by its series.
fn cin_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = 1.0; // x^{2k}/(2k)!
    let mut sum = 0.0;
    for k in 1..60 {
        let m = (2 * k) as f64;
        term *= -x2 / ((m - 1.0) * m);
        let add = -term / m;
        sum += add;
        if add.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Sine integral `Si(x) = ∫₀ˣ sin t / t dt`, odd in `x`.
pub fn si(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if x < 0.0 {
        -si(-x)
    } else {
        sici(x).0
    }
}

/// Cosine integral `Ci(x) = −∫ₓ^∞ cos t / t dt`, `x > 0`.
pub fn ci(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::DomainError(format!("Ci requires x > 0, got {x}")));
    }
    Ok(sici(x).1)
}

/// `Cin(x) = γ + ln x − Ci(x)`, even and entire; accurate near zero.
pub fn cin(x: f64) -> f64 {
    let x = x.abs();
    if x == 0.0 {
        0.0
    } else if x <= SERIES_MAX {
        cin_series(x)
    } else {
        EULER_GAMMA + x.ln() - sici(x).1
    }
}

/// Upper incomplete gamma `Γ(0, ix) = E₁(ix)` for real `x ≠ 0`.
pub fn gamma0_imag(x: f64) -> Result<Complex64> {
    if x == 0.0 {
        return Err(Error::DomainError("Γ(0, ix) is singular at x = 0".into()));
    }
    let ax = x.abs();
    let (s, c) = sici(ax);
    let v = Complex64::new(-c, s - FRAC_PI_2);
    Ok(if x > 0.0 { v } else { v.conj() })
}

/// Same as [`gamma0_imag`] with a rounding-level error estimate attached.
pub fn gamma0_imag_value(x: f64) -> Result<SpecialValue> {
    let value = gamma0_imag(x)?;
    let est_abs_err = 8.0 * f64::EPSILON * (1.0 + value.norm() + x.abs().ln().abs());
    Ok(SpecialValue { value, est_abs_err })
}

/// `J(c) = ∫₀¹ (e^{iπct} − 1)/t dt = −Cin(π|c|) + i·sgn(c)·Si(π|c|)`.
pub fn j_integral(c: f64) -> Complex64 {
    if c == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let x = PI * c.abs();
    let s = if x <= SERIES_MAX { si_series(x) } else { sici(x).0 };
    Complex64::new(-cin(x), c.signum() * s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    Principal,
    Lower,
}

/// Real Lambert W on branch `0` (`x ≥ −1/e`) or `−1` (`−1/e ≤ x < 0`).
pub fn lambert_w(branch: Branch, x: f64) -> Result<f64> {
    let em1 = -1.0 / E;
    if x.is_nan() || x < em1 - 4.0 * f64::EPSILON {
        return Err(Error::DomainError(format!("Lambert W argument {x} < -1/e")));
    }
    if branch == Branch::Lower && x >= 0.0 {
        return Err(Error::DomainError(format!("W₋₁ requires x < 0, got {x}")));
    }
    let x = x.max(em1);
    if x == em1 {
        return Ok(-1.0);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let p = (2.0 * (E * x + 1.0)).max(0.0).sqrt();
    let mut w = match branch {
        Branch::Principal => {
            if p < 0.5 {
                -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
            } else if x < 3.0 {
                // log1p start is fine on the middle range
                let l = x.ln_1p();
                l * (1.0 - l.ln_1p() / (2.0 + l))
            } else {
                let l = x.ln();
                l - l.ln()
            }
        }
        Branch::Lower => {
            if p < 0.5 {
                -1.0 - p - p * p / 3.0 - 11.0 / 72.0 * p * p * p
            } else {
                let l = (-x).ln();
                l - (-l).ln()
            }
        }
    };
    for _ in 0..100 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1.abs() < 1e-300 {
            break;
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        w -= step;
        if step.abs() <= 1e-15 * w.abs().max(1e-300) {
            break;
        }
    }
    Ok(w)
}

/// Roots of `a₁x + a₂ log x + a₃ = 0` in the form `x = r₁ W(e^{r₂} r₃)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LogLinearRoots {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    /// `e^{r₂} r₃`
    pub arg: f64,
    /// Root from the principal branch.
    pub x0: f64,
    /// Root from the lower branch, when it exists.
    pub x_m1: Option<f64>,
}

/// Solve `a₁x + a₂ log x + a₃ = 0` with `r₁ = a₂/a₁`, `r₂ = −a₃/a₂`, `r₃ = a₁/a₂`.
///
/// With `a₂ = 0` the single root `−a₃/a₁` is returned in `x0`.
pub fn solve_loglinear(a1: f64, a2: f64, a3: f64) -> Result<LogLinearRoots> {
    if a1 == 0.0 {
        return Err(Error::DomainError("a₁ must be non-zero".into()));
    }
    if a2 == 0.0 {
        let x = -a3 / a1;
        if !(x > 0.0) {
            return Err(Error::DomainError(format!("linear root {x} is not positive")));
        }
        return Ok(LogLinearRoots { r1: 0.0, r2: 0.0, r3: 0.0, arg: 0.0, x0: x, x_m1: None });
    }
    roots_from_r(a2 / a1, -a3 / a2, a1 / a2)
}

/// Evaluate `x = r₁ W_k(e^{r₂} r₃)` on both real branches.
pub fn roots_from_r(r1: f64, r2: f64, r3: f64) -> Result<LogLinearRoots> {
    let arg = r2.exp() * r3;
    if arg < -1.0 / E - 4.0 * f64::EPSILON {
        return Err(Error::NoRealRoot { arg });
    }
    let x0 = r1 * lambert_w(Branch::Principal, arg)?;
    let x_m1 = if arg < 0.0 { Some(r1 * lambert_w(Branch::Lower, arg)?) } else { None };
    Ok(LogLinearRoots { r1, r2, r3, arg, x0, x_m1 })
}
