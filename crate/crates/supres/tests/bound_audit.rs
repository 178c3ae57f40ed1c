mod common;

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use supres::bound_audit::*;

/// Term-by-term antiderivative of `Σ_m e^{2πim(s+t)}` over `t ∈ [0, −θ]`.
fn f_closed_form(s: f64, theta: f64, n: usize) -> Complex64 {
    (1..=n + 1)
        .map(|m| {
            let w = 2.0 * PI * m as f64;
            let a = w * (s - theta);
            let b = w * s;
            Complex64::new((a.sin() - b.sin()) / w, (b.cos() - a.cos()) / w)
        })
        .sum()
}

/// Midpoint rule with `m` points of the direct sum.
fn f_riemann(s: f64, theta: f64, n: usize, m: usize) -> Complex64 {
    let h = theta / m as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..m {
        let t = -(i as f64 + 0.5) * h;
        let x = s + t;
        // cos/sin sums in closed trigonometric form, evaluated directly
        for k in 1..=n + 1 {
            acc += Complex64::from_polar(1.0, 2.0 * PI * k as f64 * x);
        }
    }
    -acc * h
}

#[test]
fn quadrature_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..200 {
        let n = rng.random_range(4..40);
        let s = rng.random::<f64>() - 0.5;
        let t = 0.5 * rng.random::<f64>();
        let q = f_inner(s, t, n).unwrap();
        let want = f_closed_form(s, t, n);
        assert!((q.value - want).norm() <= 1e-9, "n={n} s={s} θ={t}");
        assert!(q.est_abs_err <= 1e-9);
    }
}

#[test]
fn riemann_oracle_n10() {
    let q = f_inner(0.3, 0.1, 10).unwrap().value;
    let r = f_riemann(0.3, 0.1, 10, 1_000_000);
    assert!((q - r).norm() <= 1e-6, "{q} vs {r}");
}

#[test]
fn real_part_is_dirichlet_ratio_integral() {
    let (n, s, th) = (12usize, 0.17, 0.33);
    let nn = (2 * n + 3) as f64;
    let g = |t: f64| {
        let x = s + t;
        Complex64::new(((nn * PI * x).sin() - (PI * x).sin()) / (2.0 * (PI * x).sin()), 0.0)
    };
    // integrate over [−θ, 0] avoiding the removable point x = 0 by the GL node layout
    let v = -common::composite_gl(g, -th, 0.0, 200, 16);
    let q = f_inner(s, th, n).unwrap().value;
    assert!((q.re - v.re).abs() < 1e-9, "{} vs {}", q.re, v.re);
}

#[test]
fn classification_is_total() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for n in [4usize, 8, 16, 32] {
        for _ in 0..10_000 {
            let s = rng.random::<f64>() - 0.5;
            let t = 0.5 * rng.random::<f64>();
            assert!(classify_domain(s, t, n).is_ok());
        }
    }
}

#[test]
fn every_domain_is_hit() {
    let r = check_master_bounds(10, 110, 1).unwrap();
    for d in &r.per_domain {
        assert_eq!(d.samples, 10, "{}", d.domain);
    }
}

#[test]
fn d2_minus_and_d1_plus_specific_bounds() {
    let n = 10;
    let nn = (2 * n + 3) as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let e = edge(n);
    let mut seen = (0, 0);
    for _ in 0..20_000 {
        let s = 2.0 * e * (rng.random::<f64>() - 0.5);
        let t = 2.0 * e * rng.random::<f64>();
        match classify_domain(s, t, n).unwrap() {
            DomainLabel::D2Minus => {
                let f = f_inner(s, t, n).unwrap().value;
                assert!(f.re.abs() <= nn * PI * t / 4.0 + t / 2.0);
                seen.0 += 1;
            }
            DomainLabel::D1Plus => {
                let f = f_inner(s, t, n).unwrap().value;
                assert!(f.re.abs() <= PI * nn * t / 4.0 + t / 2.0);
                seen.1 += 1;
            }
            _ => {}
        }
    }
    assert!(seen.0 > 100 && seen.1 > 100);
}

#[test]
fn zero_violations_n_8_16_32() {
    for n in [8, 16, 32] {
        let r = check_master_bounds(n, 500, 42).unwrap();
        assert!(r.samples >= 500);
        assert!(r.violations.is_empty(), "n={n}: {:?}", &r.violations[..r.violations.len().min(5)]);
        assert_eq!(r.triangle_failures, 0);
    }
}

#[test]
fn audit_is_deterministic_and_csv_shaped() {
    let a = check_master_bounds(8, 200, 5).unwrap();
    let b = check_master_bounds(8, 200, 5).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let csv = audit_csv(&a).unwrap();
    assert!(csv.starts_with("domain,s,theta,measured,bound\n"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn triangle_inequality_on_random_points(s in -0.5f64..0.5, t in 0.0f64..0.5, n in 4usize..33) {
        let label = classify_domain(s, t, n).unwrap();
        let f = f_inner(s, t, n).unwrap();
        let (re, im) = master_bounds(label, s, t, n);
        prop_assert!(f.value.norm() <= 2.0 * (re + im) + f.est_abs_err);
        prop_assert!(re > 0.0 && im > 0.0);
    }
}
