mod common;

use std::f64::consts::{E, PI};

use num_complex::Complex64;
use proptest::prelude::*;
use supres::specfun::*;

fn re(f: impl Fn(f64) -> f64) -> impl Fn(f64) -> Complex64 {
    move |x| Complex64::new(f(x), 0.0)
}

/// `Si(x)` by composite Gauss–Legendre on `sin t/t`.
fn si_oracle(x: f64) -> f64 {
    let panels = (4.0 * x).ceil().max(4.0) as usize;
    common::composite_gl(re(|t: f64| if t == 0.0 { 1.0 } else { t.sin() / t }), 0.0, x, panels, 20).re
}

/// `Cin(x)` by composite Gauss–Legendre on `(1 − cos t)/t`.
fn cin_oracle(x: f64) -> f64 {
    let panels = (4.0 * x).ceil().max(4.0) as usize;
    // 2 sin²(t/2)/t avoids cancellation near 0
    common::composite_gl(re(|t: f64| 2.0 * (0.5 * t).sin().powi(2) / t), 0.0, x, panels, 20).re
}

/// `E₁(ix) = e^{−ix} ∫₀^∞ e^{−t}/(t + ix) dt`.
fn e1_oracle(x: f64) -> Complex64 {
    let f = |t: f64| (-t).exp() / Complex64::new(t, x);
    let near = common::composite_gl(f, 0.0, 2.0, 400, 20);
    let far = common::composite_gl(f, 2.0, 60.0, 200, 20);
    Complex64::from_polar(1.0, -x) * (near + far)
}

const POINTS: [f64; 12] = [1e-6, 0.01, 0.5, 1.0, 1.999, 2.0, 2.001, 3.0, 10.0, 31.4, 100.0, 250.0];

#[test]
fn si_and_cin_match_quadrature() {
    for &x in &POINTS {
        let s = si_oracle(x);
        assert!((si(x) - s).abs() <= 1e-13 * (1.0 + s.abs()), "Si({x}): {} vs {s}", si(x));
        assert!((si(-x) + s).abs() <= 1e-13 * (1.0 + s.abs()));
        let c = cin_oracle(x);
        assert!((cin(x) - c).abs() <= 1e-12 * (1.0 + c.abs()), "Cin({x}): {} vs {c}", cin(x));
        let ci_want = EULER_GAMMA + x.ln() - c;
        assert!((ci(x).unwrap() - ci_want).abs() <= 1e-12 * (1.0 + ci_want.abs()));
    }
}

#[test]
fn gamma0_imag_matches_integral_representation() {
    for &x in &[0.1, 0.7, 1.5, 2.5, 8.0, 40.0] {
        for sx in [x, -x] {
            let got = gamma0_imag(sx).unwrap();
            let want = e1_oracle(sx);
            assert!((got - want).norm() <= 1e-12 * (1.0 + want.norm()), "x={sx}: {got} vs {want}");
        }
    }
    assert!(gamma0_imag(0.0).is_err());
    let v = gamma0_imag_value(3.0).unwrap();
    assert!(v.est_abs_err > 0.0 && v.est_abs_err < 1e-13);
}

#[test]
fn j_integral_matches_quadrature() {
    for &c in &[-7.3, -1.0, -0.01, 0.0, 0.3, 1.0, 4.0, 25.0] {
        let f = |t: f64| {
            let z = Complex64::new(0.0, PI * c * t);
            if t == 0.0 { Complex64::new(0.0, PI * c) } else { (z.exp() - 1.0) / t }
        };
        let want = common::composite_gl(f, 0.0, 1.0, 100, 20);
        assert!((j_integral(c) - want).norm() < 1e-13 * (1.0 + want.norm()), "c={c}");
    }
}

#[test]
fn ci_domain() {
    assert!(ci(0.0).is_err());
    assert!(ci(-1.0).is_err());
}

#[test]
fn lambert_branches() {
    for &x in &[-1.0 / E + 1e-10, -0.3, -0.01, 0.0, 0.5, 1.0, 10.0, 1e6] {
        let w = lambert_w(Branch::Principal, x).unwrap();
        assert!(w >= -1.0);
        assert!((w * w.exp() - x).abs() <= 1e-13 * (1.0 + x.abs()), "W0({x})");
    }
    for &x in &[-1.0 / E + 1e-10, -0.3, -0.01, -1e-8, -1e-100] {
        let w = lambert_w(Branch::Lower, x).unwrap();
        assert!(w <= -1.0);
        assert!((w * w.exp() - x).abs() <= 1e-13 * x.abs().max(1e-300) + 1e-16, "W-1({x})");
    }
    assert!((lambert_w(Branch::Principal, E).unwrap() - 1.0).abs() < 1e-15);
    assert!((lambert_w(Branch::Lower, -2.0 * (-2f64).exp()).unwrap() + 2.0).abs() < 1e-13);
    assert!(lambert_w(Branch::Principal, -0.5).is_err());
    assert!(lambert_w(Branch::Lower, 0.1).is_err());
}

#[test]
fn loglinear_roots_solve_the_equation() {
    let r = solve_loglinear(1.0, -50.0, -100.0).unwrap();
    for x in [r.x0, r.x_m1.unwrap()] {
        assert!((x - 50.0 * x.ln() - 100.0).abs() < 1e-9 * x);
    }
    assert!(solve_loglinear(0.0, 1.0, 1.0).is_err());
    // positive argument: only the principal branch gives a root
    let r = solve_loglinear(1.0, 1.0, -3.0).unwrap();
    assert!(r.x_m1.is_none() && (r.x0 + r.x0.ln() - 3.0).abs() < 1e-13);
    assert!(matches!(roots_from_r(1.0, 0.0, -1.0), Err(supres::Error::NoRealRoot { .. })));
}

proptest! {
    #[test]
    fn si_is_odd_and_bounded(x in -500.0f64..500.0) {
        prop_assert!((si(x) + si(-x)).abs() < 1e-15);
        prop_assert!(si(x).abs() <= 1.8519370519824662 + 1e-12);
    }

    #[test]
    fn w0_inverts(x in -0.36787f64..1e8) {
        let w = lambert_w(Branch::Principal, x).unwrap();
        prop_assert!((w * w.exp() - x).abs() <= 1e-12 * (1.0 + x.abs()));
    }
}
