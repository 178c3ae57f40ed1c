//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! fatal criterion fails.

mod common;

use std::alloc::{GlobalAlloc, Layout, System};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use supres::bound_audit::{check_master_bounds, DomainLabel};
use supres::certificate::{solve_certificate, AtomicMeasure, Certificate};
use supres::constants::{c1_bound_default, eta_star, f_k, C1_DEFAULT, Q_NORM_FLOOR};
use supres::gram::{assemble_and_verify, certificate_dim, lambda_min_aatilde, p_err, norm_w};
use supres::qk_operator::{dense_operator, qk_dense, qk_entry, qk_finite_n, truncation_budget, AsymptoticOperator};
use supres::spectrum::{dense_singular_values, spectrum_report, DEFAULT_TOL};

/// Heap accounting: current and peak live bytes.
struct Counting;

static LIVE: AtomicUsize = AtomicUsize::new(0);
static PEAK: AtomicUsize = AtomicUsize::new(0);

unsafe impl GlobalAlloc for Counting {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let p = unsafe { System.alloc(layout) };
        if !p.is_null() {
            let now = LIVE.fetch_add(layout.size(), Ordering::Relaxed) + layout.size();
            PEAK.fetch_max(now, Ordering::Relaxed);
        }
        p
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        unsafe { System.dealloc(ptr, layout) };
        LIVE.fetch_sub(layout.size(), Ordering::Relaxed);
    }

    unsafe fn realloc(&self, ptr: *mut u8, layout: Layout, new_size: usize) -> *mut u8 {
        let p = unsafe { System.realloc(ptr, layout, new_size) };
        if !p.is_null() {
            if new_size >= layout.size() {
                let now = LIVE.fetch_add(new_size - layout.size(), Ordering::Relaxed) + new_size - layout.size();
                PEAK.fetch_max(now, Ordering::Relaxed);
            } else {
                LIVE.fetch_sub(layout.size() - new_size, Ordering::Relaxed);
            }
        }
        p
    }
}

#[global_allocator]
static GLOBAL: Counting = Counting;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// The 25 instances shared by criteria 1 and 2.
fn certificate_instances() -> Vec<AtomicMeasure> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..25)
        .map(|i| {
            let s: usize = rng.random_range(1..=4);
            let n: usize = rng.random_range(64..=512);
            let sep = 4.0 * ((s + 1) as f64).ln() / n as f64;
            AtomicMeasure::random(n, s, sep, 1000 + i).expect("instance")
        })
        .collect()
}

fn criterion1(certs: &mut Vec<Certificate>) -> Outcome {
    let start = Instant::now();
    let mut worst0 = 0.0f64;
    let mut worst1 = 0.0f64;
    let mut errors = Vec::new();
    for m in certificate_instances() {
        match solve_certificate(&m) {
            Ok(c) => {
                let (e0, e1) = c.verify_interpolation();
                worst0 = worst0.max(e0);
                worst1 = worst1.max(e1 / (c.n * c.n) as f64);
                certs.push(c);
            }
            Err(e) => errors.push(format!("n={} |S|={}: {e}", m.n, m.len())),
        }
    }
    let t = start.elapsed().as_secs_f64();
    let pass = errors.is_empty() && worst0 <= 1e-9 && worst1 <= 1e-7 && t < 10.0;
    outcome(
        pass,
        format!(
            "25 measures: max |η(τ)−sign| = {worst0:.2e} (≤ 1e-9), max |η'(τ)|/n² = {worst1:.2e} (≤ 1e-7), {t:.2} s (< 10 s){}",
            if errors.is_empty() { String::new() } else { format!(", errors: {}", errors.join("; ")) }
        ),
    )
}

fn criterion2(certs: &[Certificate]) -> Outcome {
    let mut worst = 0.0f64;
    let mut failed = 0;
    for c in certs {
        let r = c.verify_bounded(10);
        worst = worst.max(r.sup_off_atom);
        if !r.certified {
            failed += 1;
        }
    }
    outcome(
        failed == 0 && certs.len() == 25,
        format!("{}/{} certified, worst certified off-atom bound {worst:.6} (< 1)", certs.len() - failed, certs.len()),
    )
}

fn criterion3() -> Outcome {
    let start = Instant::now();
    let run = || -> supres::Result<(f64, f64, f64)> {
        let m = AtomicMeasure::with_unit_signs(128, &[0.1, 0.5])?;
        let r = assemble_and_verify(&solve_certificate(&m)?)?;
        let m256 = AtomicMeasure::with_unit_signs(256, &[0.1, 0.5])?;
        let (perr, _) = p_err(&solve_certificate(&m256)?)?;
        Ok((r.sup_poly_err, r.min_eig, norm_w(&perr)))
    };
    match run() {
        Ok((sup, min_eig, wn)) => {
            let t = start.elapsed().as_secs_f64();
            outcome(
                sup <= 1e-8 && min_eig >= -1e-9 && wn <= 1.0 / 256.0 && t < 30.0,
                format!(
                    "n=128: sup |ψ*Qψ − (1−|η|²)| = {sup:.2e} (≤ 1e-8), λ_min(Q) = {min_eig:.3e} (≥ −1e-9); n=256: ‖p_err‖_W = {wn:.3e} (≤ {:.3e}); {t:.2} s (< 30 s)",
                    1.0 / 256.0
                ),
            )
        }
        Err(e) => outcome(false, format!("error: {e}")),
    }
}

fn criterion4() -> Outcome {
    let mut lows = Vec::new();
    let mut fails = 0;
    for i in 0..10u64 {
        let s = 1 + (i % 2) as usize;
        let m = AtomicMeasure::random(64, s, 0.25, 300 + i).expect("instance");
        match lambda_min_aatilde(&m, certificate_dim(64)) {
            Ok(r) => {
                if r.lambda_min < 0.1 || r.null_dim != r.expected_null_dim {
                    fails += 1;
                }
                lows.push(r.lambda_min);
            }
            Err(_) => fails += 1,
        }
    }
    let min = lows.iter().copied().fold(f64::INFINITY, f64::min);
    outcome(fails == 0, format!("10 instances (n=64, Δ ≥ 0.25, |S| ≤ 2): min λ_min(AÃ*) = {min:.4} (≥ 0.1), {fails} below"))
}

fn criterion5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut entry_gap = 0.0f64;
    for _ in 0..50 {
        let a: i64 = rng.random_range(-30..=30);
        let b: i64 = rng.random_range(-30..=30);
        let got = qk_entry(30, a, b).expect("entry").re;
        entry_gap = entry_gap.max((got - common::q_entry_oracle(a, b)).abs());
    }

    let k = 200;
    let dense = dense_operator(k).expect("dense");
    let op = AsymptoticOperator::new(k);
    let x: Vec<Complex64> =
        (0..2 * k + 1).map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
    let fast = op.matvec(&x);
    let mut mv_gap = 0.0f64;
    for i in 0..=2 * k {
        let slow: Complex64 = (0..=2 * k).map(|j| x[j] * dense[(i, j)]).sum();
        mv_gap = mv_gap.max((slow - fast[i]).norm());
    }

    let lim = qk_dense(20).expect("dense");
    let gaps: Vec<f64> =
        [500, 1000, 2000].iter().map(|&n| (qk_finite_n(20, n).expect("finite n") - &lim).abs().max()).collect();
    let decreasing = gaps[0] > gaps[1] && gaps[1] > gaps[2];
    outcome(
        entry_gap <= 1e-8 && mv_gap <= 1e-11 && decreasing,
        format!(
            "entries vs quadrature {entry_gap:.2e} (≤ 1e-8); K=200 matvec vs dense {mv_gap:.2e} (≤ 1e-11); finite-n gaps n=500/1000/2000: {:.3e} / {:.3e} / {:.3e} (decreasing)",
            gaps[0], gaps[1], gaps[2]
        ),
    )
}

fn criterion6() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut pass = true;
    let mut mins = Vec::new();
    for k in [40usize, 100, 200, 400] {
        let r = match spectrum_report(k, DEFAULT_TOL, 0) {
            Ok(r) => r,
            Err(e) => return outcome(false, format!("K={k}: {e}")),
        };
        let sv = dense_singular_values(k).expect("dense SVD");
        let (dmax, dmin) = (sv[0], *sv.last().unwrap());
        let agree = (r.sigma_max - dmax).abs() <= r.residual_max + 1e-12
            && (r.sigma_min - dmin).abs() <= r.residual_min + 1e-12;
        pass &= agree;
        if k == 40 {
            pass &= (0.50..=0.75).contains(&r.sigma_min) && (1.30..=1.42).contains(&r.sigma_max);
            notes.push(format!("K=40 σ_min {:.6} ∈ [0.50,0.75], σ_max {:.6} ∈ [1.30,1.42]", r.sigma_min, r.sigma_max));
        } else {
            pass &= r.sigma_min - r.residual_min > 0.5;
            mins.push(r.sigma_min);
            notes.push(format!("K={k} σ_min {:.6}", r.sigma_min));
        }
        notes.push(format!(
            "dense gap {:.1e}/{:.1e} vs residual {:.1e}/{:.1e}",
            (r.sigma_min - dmin).abs(),
            (r.sigma_max - dmax).abs(),
            r.residual_min,
            r.residual_max
        ));
    }
    let lo = mins.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = mins.iter().copied().fold(0.0, f64::max);
    let variation = (hi - lo) / lo;
    let t = start.elapsed().as_secs_f64();
    pass &= variation <= 0.05 && t < 120.0;
    notes.push(format!("σ_min variation over K=100..400 {:.2}% (≤ 5%), {t:.1} s (< 120 s)", 100.0 * variation));
    outcome(pass, notes.join("; "))
}

fn criterion7() -> Outcome {
    let start = Instant::now();
    let roots = match c1_bound_default() {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("error: {e}")),
    };
    let small = roots.x0;
    let large = roots.x_m1.unwrap_or(f64::NAN);
    let eta = eta_star(C1_DEFAULT).unwrap_or(f64::NAN);
    let f = f_k(2e13, C1_DEFAULT, Q_NORM_FLOOR).unwrap_or(f64::NAN);
    let t = start.elapsed().as_secs_f64();
    let ok_small = (small - 0.1354).abs() <= 1e-3;
    let ok_large = (large - 2496.7).abs() <= 1.0;
    let ok_eta = (eta - 0.0112).abs() <= 5e-4;
    let ok_f = (f - 0.00807).abs() <= 0.1 * 0.00807;
    outcome(
        ok_small && ok_large && ok_eta && ok_f && t < 1.0,
        format!(
            "C₁ roots {small:.6} (0.1354 ± 0.001: {}), {large:.4} (2496.7 ± 1.0: {}); η*(2500) = {eta:.6} (0.0112 ± 0.0005: {}); f(2e13) = {f:.6} (0.00807 ± 10%: {}); {:.1} ms",
            ok(ok_small),
            ok(ok_large),
            ok(ok_eta),
            ok(ok_f),
            1e3 * t
        ),
    )
}

fn ok(b: bool) -> &'static str {
    if b { "ok" } else { "MISS" }
}

fn criterion8() -> Outcome {
    let r = truncation_budget(1e13, 1.0);
    let groups: [(&[&str], f64); 4] =
        [(&["B1", "B2", "B2b"], 1e6), (&["B3", "B4"], 1e7), (&["B5"], 7.54e10), (&["B6"], 1.46e10)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (names, reference) in groups {
        let found = r
            .entries
            .iter()
            .filter(|e| names.contains(&e.name))
            .map(|e| e.found_k1)
            .fold(0.0, f64::max);
        let held = r
            .entries
            .iter()
            .filter(|e| names.contains(&e.name))
            .all(|e| e.bound_at_reference <= e.threshold * (1.0 + 1e-12));
        // a doubling search lands in (K₁/2, 2K₁] of the reference threshold
        let within = found > reference / 2.0 && found <= 2.0 * reference;
        pass &= within && held;
        parts.push(format!("{}: {found:.3e} vs {reference:.3e} ({})", names.join("/"), ok(within && held)));
    }
    outcome(pass, parts.join("; "))
}

fn criterion9() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for n in [8usize, 16, 32] {
        match check_master_bounds(n, 500, 9) {
            Ok(r) => {
                let hit = DomainLabel::ALL
                    .iter()
                    .all(|d| r.per_domain.iter().any(|s| s.domain == *d && s.samples > 0));
                let worst = r
                    .per_domain
                    .iter()
                    .map(|s| s.max_ratio_re.max(s.max_ratio_im))
                    .fold(0.0, f64::max);
                pass &= r.violations.is_empty() && hit && r.samples >= 500;
                parts.push(format!(
                    "n={n}: {} samples, {} violations, {} near, all 11 domains hit: {}, worst ratio {worst:.3}",
                    r.samples,
                    r.violations.len(),
                    r.near_violations.len(),
                    hit
                ));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("n={n}: {e}"));
            }
        }
    }
    let t = start.elapsed().as_secs_f64();
    pass &= t < 120.0;
    parts.push(format!("{t:.1} s (< 120 s)"));
    outcome(pass, parts.join("; "))
}

fn criterion10() -> Outcome {
    let k = 1usize << 20;
    let dim = 2 * k + 1;
    let x: Vec<Complex64> = (0..dim).map(|i| Complex64::new(((i * 7) % 13) as f64 - 6.0, 0.5)).collect();
    let baseline = LIVE.load(Ordering::Relaxed);
    PEAK.store(baseline, Ordering::Relaxed);
    let build = Instant::now();
    let op = AsymptoticOperator::new(k);
    let build_t = build.elapsed().as_secs_f64();
    let build_peak = PEAK.load(Ordering::Relaxed) - baseline;
    let held = LIVE.load(Ordering::Relaxed) - baseline;
    PEAK.store(LIVE.load(Ordering::Relaxed), Ordering::Relaxed);
    let start = Instant::now();
    let y = op.matvec(&x);
    let t = start.elapsed().as_secs_f64();
    let matvec_peak = PEAK.load(Ordering::Relaxed) - baseline;
    let peak = build_peak.max(matvec_peak);
    let limit = 10 * (4 * k + 1) * 16;
    let finite = y.iter().all(|z| z.re.is_finite() && z.im.is_finite());
    let stored = op.kernel_bytes() + op.diagonal_bytes();
    outcome(
        t < 5.0 && peak <= limit && finite,
        format!(
            "K=2^20 (FFT length {}): matvec {t:.2} s (< 5 s, build {build_t:.2} s); peak heap {:.1} MiB (build {:.1}, matvec {:.1}, held after build {:.1}, kernels+diagonals {:.1}) ≤ {:.1} MiB",
            op.fft_len(),
            peak as f64 / 1048576.0,
            build_peak as f64 / 1048576.0,
            matvec_peak as f64 / 1048576.0,
            held as f64 / 1048576.0,
            stored as f64 / 1048576.0,
            limit as f64 / 1048576.0
        ),
    )
}

fn main() {
    let mut certs = Vec::new();
    let criteria: Vec<(usize, bool, Outcome)> = vec![
        (1, true, criterion1(&mut certs)),
        (2, true, criterion2(&certs)),
        (3, true, criterion3()),
        // the λ_min floor only holds for large enough n; a miss here is reported, not fatal
        (4, false, criterion4()),
        (5, true, criterion5()),
        (6, true, criterion6()),
        (7, true, criterion7()),
        (8, true, criterion8()),
        (9, true, criterion9()),
        (10, true, criterion10()),
    ];
    let mut fatal = Vec::new();
    for (i, is_fatal, o) in &criteria {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let note = if !o.pass && !is_fatal { " (reported, not fatal)" } else { "" };
        println!("criterion {i}: {tag}{note} {}", o.detail);
        if !o.pass && *is_fatal {
            fatal.push(*i);
        }
    }
    let passed = criteria.iter().filter(|c| c.2.pass).count();
    println!("acceptance: {passed}/{} criteria passed", criteria.len());
    if !fatal.is_empty() {
        println!("acceptance: failing criteria {fatal:?}");
        std::process::exit(1);
    }
}
