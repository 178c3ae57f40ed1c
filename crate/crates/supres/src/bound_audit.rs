//! Numerical audit of the closed-form bounds on the inner integral
//!
//! ```text
//! F(s; θ) = ∫₀^{−θ} H(s + t) dt,   H(x) = Σ_{m=1}^{n+1} e^{2πimx},
//! ```
//!
//! over the eleven `(s, θ)` subdomains of `[−1/2, 1/2] × [0, 1/2]`.
//!
//! The bounds are evaluated in magnitude form: every logarithm and every
//! denominator whose sign varies over its subdomain enters through its
//! absolute value.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::quad::integrate;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum DomainLabel {
    #[serde(rename = "D0+")]
    D0Plus,
    #[serde(rename = "D1+")]
    D1Plus,
    #[serde(rename = "D2+")]
    D2Plus,
    #[serde(rename = "D3+")]
    D3Plus,
    #[serde(rename = "D4+")]
    D4Plus,
    #[serde(rename = "D0-")]
    D0Minus,
    #[serde(rename = "D1-")]
    D1Minus,
    #[serde(rename = "D2-")]
    D2Minus,
    #[serde(rename = "D3-")]
    D3Minus,
    #[serde(rename = "D4-")]
    D4Minus,
    #[serde(rename = "D5-")]
    D5Minus,
}

impl DomainLabel {
    pub const ALL: [DomainLabel; 11] = [
        DomainLabel::D0Plus,
        DomainLabel::D1Plus,
        DomainLabel::D2Plus,
        DomainLabel::D3Plus,
        DomainLabel::D4Plus,
        DomainLabel::D0Minus,
        DomainLabel::D1Minus,
        DomainLabel::D2Minus,
        DomainLabel::D3Minus,
        DomainLabel::D4Minus,
        DomainLabel::D5Minus,
    ];

    pub fn name(self) -> &'static str {
        use DomainLabel::*;
        match self {
            D0Plus => "D0+",
            D1Plus => "D1+",
            D2Plus => "D2+",
            D3Plus => "D3+",
            D4Plus => "D4+",
            D0Minus => "D0-",
            D1Minus => "D1-",
            D2Minus => "D2-",
            D3Minus => "D3-",
            D4Minus => "D4-",
            D5Minus => "D5-",
        }
    }

    /// Bounding box `(s_lo, s_hi, θ_lo, θ_hi)` used for rejection sampling.
    fn bounding_box(self, n: usize) -> (f64, f64, f64, f64) {
        use DomainLabel::*;
        let e = edge(n);
        match self {
            D0Plus => (e, 0.5, 2.0 * e, 0.5),
            D1Plus => (0.0, e, 0.0, 2.0 * e),
            D2Plus => (e, 0.5, 0.0, 0.5),
            D3Plus => (0.0, e, e, 0.5),
            D4Plus => (e, 0.5, 0.0, 0.5),
            D0Minus => (-0.5, -e, 0.0, 0.5),
            D1Minus => (-e, 0.0, e, 0.5),
            D2Minus => (-e, 0.0, 0.0, e),
            D3Minus => (-0.5, -e, 0.0, 0.5),
            D4Minus => (-e, 0.0, 0.5 - e, 0.5),
            D5Minus => (-0.5, -0.5 + e, 0.5 - e, 0.5),
        }
    }
}

impl std::fmt::Display for DomainLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Width `1/(2n+3)` of the Dirichlet main lobe.
pub fn edge(n: usize) -> f64 {
    1.0 / (2 * n + 3) as f64
}

/// `c = (1/2 + 1/π)/(4(2n+3))`.
pub fn c_const(n: usize) -> f64 {
    (0.5 + 1.0 / PI) / (4.0 * (2 * n + 3) as f64)
}

/// Subdomain of `(s, θ) ∈ [−1/2, 1/2] × [0, 1/2]`; ties go to the lower index.
pub fn classify_domain(s: f64, theta: f64, n: usize) -> Result<DomainLabel> {
    use DomainLabel::*;
    if !(-0.5..=0.5).contains(&s) || !(0.0..=0.5).contains(&theta) {
        return Err(Error::DomainError(format!("(s, θ) = ({s}, {theta}) outside the rectangle")));
    }
    let e = edge(n);
    let d = s - theta;
    Ok(if s >= 0.0 {
        if s > e && s < theta - e {
            D0Plus
        } else if s <= e && theta <= s + e {
            D1Plus
        } else if s > e && d.abs() <= e {
            D2Plus
        } else if s <= e {
            // here θ > s + e ≥ e
            D3Plus
        } else {
            // s > e, s − θ > e
            D4Plus
        }
    } else if s.abs() > e {
        if d >= -0.5 {
            D0Minus
        } else if d >= -1.0 + e {
            D3Minus
        } else {
            D5Minus
        }
    } else if d >= -0.5 && theta > e {
        D1Minus
    } else if theta <= e {
        D2Minus
    } else {
        D4Minus
    })
}

/// `H(x) = Σ_{m=1}^{n+1} e^{2πimx} = e^{iπ(n+2)x} sin((n+1)πx)/sin(πx)`.
pub fn dirichlet_tail(x: f64, n: usize) -> Complex64 {
    let sx = (PI * x).sin();
    if sx.abs() < 1e-3 {
        return (1..=(n + 1)).map(|m| Complex64::from_polar(1.0, 2.0 * PI * m as f64 * x)).sum();
    }
    Complex64::from_polar(((n + 1) as f64 * PI * x).sin() / sx, PI * (n + 2) as f64 * x)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct InnerIntegral {
    pub value: Complex64,
    pub est_abs_err: f64,
}

/// `F(s; θ)` by adaptive Gauss–Kronrod with breakpoints at the peaks `t = −s`, `t = −1 − s`.
pub fn f_inner(s: f64, theta: f64, n: usize) -> Result<InnerIntegral> {
    if !(0.0..=0.5).contains(&theta) {
        return Err(Error::DomainError(format!("θ = {theta} outside [0, 1/2]")));
    }
    let r = integrate(|t| dirichlet_tail(s + t, n), 0.0, -theta, &[-s, -1.0 - s], 1e-12, 0.0, 4000);
    Ok(InnerIntegral { value: r.value, est_abs_err: r.abs_err })
}

/// Closed-form bounds `(Re bound, Im bound)` on subdomain `label`.
pub fn master_bounds(label: DomainLabel, s: f64, theta: f64, n: usize) -> (f64, f64) {
    use DomainLabel::*;
    let e = edge(n);
    let c = c_const(n);
    let nn = (2 * n + 3) as f64;
    let nf = n as f64;
    let ln = |x: f64| x.ln().abs();
    let small = theta <= e;
    // |θ − s| — the sign of s − θ varies in several of the formulas
    let a = (theta - s).abs();
    let cross = theta / (8.0 * nn * (s * (s - theta)).abs());
    match label {
        D0Minus => {
            let re = if !small {
                c * (1.0 / -s + 1.0 / a) + theta / 2.0
            } else {
                1.5 * theta / a + cross + theta / 2.0
            };
            let im = if small {
                1.5 * theta / a + cross + 0.25 * ln(-s / a)
            } else {
                c * (1.0 / s.abs() + 1.0 / a) + 0.25 * ln(-s / a)
            };
            (re, im)
        }
        D1Minus => (
            PI / 4.0 + c * (1.0 / (-s + e) + 1.0 / a) + theta / 2.0,
            c * (1.0 / a + 1.0 / (1.0 / nf - s)) + PI * (nf + 1.0) / (4.0 * nf) + ln(a / (1.0 / nf - s)),
        ),
        D2Minus => (nn * PI * theta / 4.0 + theta / 2.0, PI * (nf + 1.0) * theta / 4.0),
        D3Minus => {
            let u = 1.0 + s - theta;
            (
                c * (2.0 + 1.0 / u) + c * (1.0 / -s + 2.0) + theta / 2.0,
                0.25 * (ln(1.0 / -s) + ln(1.0 / u)) + 2.0 * 2f64.ln() + c * (4.0 + 1.0 / -s + 1.0 / u),
            )
        }
        D4Minus => {
            let u = 1.0 + s - theta;
            (
                c * (2.0 + 1.0 / u) + PI / 4.0 + c * (1.0 / (e - s) + 2.0),
                (nf + 1.0) * PI / (4.0 * nf)
                    + c * (1.0 / u + 1.0 / (-s + 1.0 / nf) + 4.0)
                        * ((0.5 / u).ln() + (0.5 / (-s + 1.0 / nf)).ln()).abs(),
            )
        }
        D5Minus => {
            let u = 1.0 + s - theta;
            (
                PI / 4.0 + c * (2.0 + 1.0 / (u + e)) + c * (2.0 + 1.0 / -s) + theta / 2.0,
                PI / 2.0
                    + 0.25 * ln(0.5 / -s + 0.5 / (u + 1.0 / nf))
                    + c * (2.0 + 1.0 / (u + 1.0 / nf) + 1.0 / -s),
            )
        }
        D0Plus => (
            PI / 2.0 + c * (2.0 * nn + 1.0 / s + 1.0 / a) + theta / 2.0,
            c * (1.0 / s + 1.0 / a) + ln((s / a).max(a / s)),
        ),
        D1Plus => (PI * nn * theta / 4.0 + theta / 2.0, (nf + 1.0) * PI * theta / 2.0),
        D2Plus => (
            PI / 2.0 + c * (1.0 / s + 1.0 / (s - theta + 2.0 * e).abs()) + theta / 2.0,
            (nf + 1.0) * PI / (2.0 * nf)
                + c * (1.0 / s.abs() + 1.0 / (s - theta + 2.0 / nf).abs())
                + 0.25 * ln(s / (s - theta + 2.0 / nf)),
        ),
        D3Plus => (
            nn * PI / 4.0 * (s + e) + c * (nn + 1.0 / a) + theta / 2.0,
            c * (1.0 / a + 1.0 / (2.0 / nf - s)) + 0.25 * ln(a / (2.0 / nf - s)) + PI * (nf + 1.0) / nf,
        ),
        D4Plus => {
            if small {
                (
                    1.5 * theta / a + cross + theta / 2.0,
                    4.0 * PI * PI * theta / (8.0 * a) + cross + 0.25 * ln(s / a),
                )
            } else {
                (c * (1.0 / s + 1.0 / a) + theta / 2.0, c * (1.0 / s + 1.0 / a) + 0.25 * ln(s / a))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Part {
    Re,
    Im,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditRecord {
    pub domain: DomainLabel,
    pub part: Part,
    pub s: f64,
    pub theta: f64,
    pub measured: f64,
    pub bound: f64,
    pub quad_err: f64,
}

impl AuditRecord {
    /// CSV domain column, e.g. `D0-(Im)`.
    pub fn domain_tag(&self) -> String {
        let p = match self.part {
            Part::Re => "Re",
            Part::Im => "Im",
        };
        format!("{}({p})", self.domain.name())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DomainStats {
    pub domain: DomainLabel,
    pub samples: usize,
    pub max_ratio_re: f64,
    pub max_ratio_im: f64,
    pub mean_ratio_re: f64,
    pub mean_ratio_im: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    /// `measured > 2·bound`
    pub violations: Vec<AuditRecord>,
    /// `bound + quad_err < measured ≤ 2·bound`
    pub near_violations: Vec<AuditRecord>,
    pub per_domain: Vec<DomainStats>,
    pub max_quad_err: f64,
    /// Samples where `|F| > Re bound + Im bound + quad_err`.
    pub triangle_failures: usize,
}

fn sample_domain(label: DomainLabel, n: usize, count: usize, seed: u64) -> Vec<(f64, f64)> {
    let (s0, s1, t0, t1) = label.bounding_box(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (label as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut out = Vec::with_capacity(count);
    let mut tries = 0usize;
    while out.len() < count && tries < 10_000 * count.max(1) {
        tries += 1;
        let s = s0 + (s1 - s0) * rng.random::<f64>();
        let t = t0 + (t1 - t0) * rng.random::<f64>();
        if classify_domain(s, t, n).ok() == Some(label) {
            out.push((s, t));
        }
    }
    out
}

/// Stratified audit: `sample_count` points split evenly over the eleven subdomains.
pub fn check_master_bounds(n: usize, sample_count: usize, seed: u64) -> Result<AuditReport> {
    if n < 4 {
        return Err(Error::DomainError(format!("audit requires n ≥ 4, got {n}")));
    }
    let per = sample_count.div_ceil(DomainLabel::ALL.len()).max(1);
    let points: Vec<(DomainLabel, f64, f64)> = DomainLabel::ALL
        .iter()
        .flat_map(|&l| sample_domain(l, n, per, seed).into_iter().map(move |(s, t)| (l, s, t)))
        .collect();
    struct Eval {
        label: DomainLabel,
        s: f64,
        t: f64,
        f: InnerIntegral,
        re_b: f64,
        im_b: f64,
    }
    let evals: Vec<Eval> = points
        .par_iter()
        .map(|&(label, s, t)| {
            let f = f_inner(s, t, n)?;
            let (re_b, im_b) = master_bounds(label, s, t, n);
            Ok(Eval { label, s, t, f, re_b, im_b })
        })
        .collect::<Result<_>>()?;

    let mut violations = Vec::new();
    let mut near = Vec::new();
    let mut max_quad_err = 0.0f64;
    let mut triangle_failures = 0;
    for ev in &evals {
        max_quad_err = max_quad_err.max(ev.f.est_abs_err);
        if ev.f.value.norm() > ev.re_b + ev.im_b + ev.f.est_abs_err {
            triangle_failures += 1;
        }
        for (part, measured, bound) in
            [(Part::Re, ev.f.value.re.abs(), ev.re_b), (Part::Im, ev.f.value.im.abs(), ev.im_b)]
        {
            let rec = AuditRecord {
                domain: ev.label,
                part,
                s: ev.s,
                theta: ev.t,
                measured,
                bound,
                quad_err: ev.f.est_abs_err,
            };
            if measured > 2.0 * bound {
                violations.push(rec);
            } else if measured > bound + ev.f.est_abs_err {
                near.push(rec);
            }
        }
    }
    let key = |r: &AuditRecord| (r.domain, r.part, r.s, r.theta);
    let cmp = |a: &AuditRecord, b: &AuditRecord| {
        let (ka, kb) = (key(a), key(b));
        ka.0.cmp(&kb.0).then(ka.1.cmp(&kb.1)).then(ka.2.total_cmp(&kb.2)).then(ka.3.total_cmp(&kb.3))
    };
    violations.sort_by(cmp);
    near.sort_by(cmp);

    let per_domain = DomainLabel::ALL
        .iter()
        .map(|&l| {
            let rs: Vec<&Eval> = evals.iter().filter(|e| e.label == l).collect();
            let ratio = |f: &dyn Fn(&Eval) -> f64| -> (f64, f64) {
                let v: Vec<f64> = rs.iter().map(|e| f(e)).collect();
                let max = v.iter().copied().fold(0.0, f64::max);
                let mean = if v.is_empty() { 0.0 } else { v.iter().sum::<f64>() / v.len() as f64 };
                (max, mean)
            };
            let (mr, ar) = ratio(&|e| e.f.value.re.abs() / e.re_b);
            let (mi, ai) = ratio(&|e| e.f.value.im.abs() / e.im_b);
            DomainStats {
                domain: l,
                samples: rs.len(),
                max_ratio_re: mr,
                max_ratio_im: mi,
                mean_ratio_re: ar,
                mean_ratio_im: ai,
            }
        })
        .collect();
    Ok(AuditReport {
        n,
        samples: evals.len(),
        seed,
        violations,
        near_violations: near,
        per_domain,
        max_quad_err,
        triangle_failures,
    })
}

/// CSV `domain,s,theta,measured,bound` over hard and near violations.
pub fn audit_csv(report: &AuditReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::DomainError(e.to_string());
    w.write_record(["domain", "s", "theta", "measured", "bound"]).map_err(io)?;
    for r in report.violations.iter().chain(&report.near_violations) {
        w.write_record([
            r.domain_tag(),
            format!("{:.15e}", r.s),
            format!("{:.15e}", r.theta),
            format!("{:.15e}", r.measured),
            format!("{:.15e}", r.bound),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::DomainError(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::DomainError(e.to_string()))
}
