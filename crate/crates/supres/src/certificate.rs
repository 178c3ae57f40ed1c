//! The interpolating polynomial
//! `η(θ) = Σ_j a_j D(θ − τ_j) + b_j D'(θ − τ_j)` built on the centered
//! Dirichlet kernel, with `η(τ_j) = sign_j` and `η'(τ_j) = 0`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::trigpoly::{cis2pi, torus_dist, wrap_half, DirichletSpec, TrigPoly};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub position: f64,
    pub sign: Complex64,
}

#[derive(Clone, Debug)]
pub struct AtomicMeasure {
    pub n: usize,
    pub atoms: Vec<Atom>,
}

#[derive(Serialize, Deserialize)]
struct AtomDoc {
    position: f64,
    sign: [f64; 2],
}

#[derive(Serialize, Deserialize)]
struct MeasureDoc {
    n: usize,
    atoms: Vec<AtomDoc>,
}

impl AtomicMeasure {
    /// Validate and build. Positions are reduced into `[0, 1)`.
    pub fn new(n: usize, atoms: Vec<Atom>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMeasure("cutoff n must be positive".into()));
        }
        let mut atoms = atoms;
        for a in &mut atoms {
            if !a.position.is_finite() {
                return Err(Error::InvalidMeasure("non-finite position".into()));
            }
            a.position = a.position.rem_euclid(1.0);
            if ((a.sign.norm()) - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidMeasure(format!(
                    "sign at {} has modulus {}",
                    a.position,
                    a.sign.norm()
                )));
            }
        }
        for i in 0..atoms.len() {
            for j in 0..i {
                if torus_dist(atoms[i].position, atoms[j].position) < 1e-12 {
                    return Err(Error::InvalidMeasure(format!(
                        "duplicate position {}",
                        atoms[i].position
                    )));
                }
            }
        }
        Ok(AtomicMeasure { n, atoms })
    }

    /// Positive atoms with unit sign at the given positions.
    pub fn with_unit_signs(n: usize, positions: &[f64]) -> Result<Self> {
        Self::new(
            n,
            positions.iter().map(|&p| Atom { position: p, sign: Complex64::new(1.0, 0.0) }).collect(),
        )
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: MeasureDoc =
            serde_json::from_str(s).map_err(|e| Error::InvalidMeasure(e.to_string()))?;
        Self::new(
            doc.n,
            doc.atoms
                .into_iter()
                .map(|a| Atom { position: a.position, sign: Complex64::new(a.sign[0], a.sign[1]) })
                .collect(),
        )
    }

    pub fn to_json(&self) -> String {
        let doc = MeasureDoc {
            n: self.n,
            atoms: self
                .atoms
                .iter()
                .map(|a| AtomDoc { position: a.position, sign: [a.sign.re, a.sign.im] })
                .collect(),
        };
        serde_json::to_string(&doc).expect("measure serializes")
    }

    /// Random measure with `count` atoms, wrap-around separation at least
    /// `min_sep` and uniformly random unit-modulus signs.
    pub fn random(n: usize, count: usize, min_sep: f64, seed: u64) -> Result<Self> {
        if count as f64 * min_sep >= 1.0 {
            return Err(Error::InvalidMeasure("separation too large for atom count".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Place gaps: total slack distributed uniformly over the circle.
        let slack = 1.0 - count as f64 * min_sep;
        let mut cuts: Vec<f64> = (0..count).map(|_| rng.random::<f64>() * slack).collect();
        cuts.sort_by(f64::total_cmp);
        let offset: f64 = rng.random();
        let atoms = cuts
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let phase: f64 = rng.random();
                Atom {
                    position: (offset + c + i as f64 * min_sep).rem_euclid(1.0),
                    sign: cis2pi(phase),
                }
            })
            .collect();
        Self::new(n, atoms)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn positions(&self) -> Vec<f64> {
        self.atoms.iter().map(|a| a.position).collect()
    }

    /// Minimum wrap-around distance; `+∞` for fewer than two atoms.
    pub fn separation(&self) -> f64 {
        let mut d = f64::INFINITY;
        for i in 0..self.atoms.len() {
            for j in 0..i {
                d = d.min(torus_dist(self.atoms[i].position, self.atoms[j].position));
            }
        }
        d
    }

    /// Gershgorin-type estimate of `‖I − D‖` from separation alone.
    pub fn gershgorin_estimate(&self) -> f64 {
        let s = self.atoms.len();
        if s < 2 {
            return 0.0;
        }
        let l = (s as f64).ln();
        let nd = self.n as f64 * self.separation();
        let d0 = l / (4.0 * nd);
        let d1 = 3f64.sqrt() * l / nd;
        let d2 = 9.0 * l / (4.0 * nd);
        (d0 + d1).max(d1 + d2)
    }
}

/// Kernel blocks `(D₀, D₁, D₂)` with entries `D^{(k)}(τ_j − τ_k)`.
fn kernel_blocks(m: &AtomicMeasure, spec: &DirichletSpec) -> [DMatrix<f64>; 3] {
    let s = m.len();
    let pos = m.positions();
    let mut out = [DMatrix::zeros(s, s), DMatrix::zeros(s, s), DMatrix::zeros(s, s)];
    for j in 0..s {
        for k in 0..s {
            let d = pos[j] - pos[k];
            for (ord, blk) in out.iter_mut().enumerate() {
                blk[(j, k)] = spec.deriv(d, ord as u32);
            }
        }
    }
    out
}

/// Scaled block system `[[D₀, D₁/c], [−D₁/c, −D₂/c²]]·(a, c·b) = (v, 0)`
/// with `c = √|D''(0)|`.
pub fn build_system(m: &AtomicMeasure) -> (DMatrix<Complex64>, DVector<Complex64>) {
    let spec = DirichletSpec::centered(m.n);
    let c = spec.second_deriv_at_zero().abs().sqrt();
    let [d0, d1, d2] = kernel_blocks(m, &spec);
    let s = m.len();
    let mut mat = DMatrix::<Complex64>::zeros(2 * s, 2 * s);
    for j in 0..s {
        for k in 0..s {
            mat[(j, k)] = d0[(j, k)].into();
            mat[(j, s + k)] = (d1[(j, k)] / c).into();
            mat[(s + j, k)] = (-d1[(j, k)] / c).into();
            mat[(s + j, s + k)] = (-d2[(j, k)] / (c * c)).into();
        }
    }
    let mut rhs = DVector::<Complex64>::zeros(2 * s);
    for (j, a) in m.atoms.iter().enumerate() {
        rhs[j] = a.sign;
    }
    (mat, rhs)
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveBounds {
    /// Gershgorin estimate of `‖I − D‖` (must be < 1).
    pub gershgorin: f64,
    pub a_inf: f64,
    /// `√|D''(0)|·‖b‖_∞`
    pub b_scaled_inf: f64,
    /// Closed-form `ε₁` in `‖a‖_∞ ≤ 1 + ε₁`.
    pub eps1: f64,
    /// `√|D''(0)|·‖D₂⁻¹D₁‖_∞·‖(D₀ − D₁D₂⁻¹D₁)⁻¹‖_∞·‖v‖_∞` from the actual blocks.
    pub beta_bound: f64,
    /// Closed-form bound on `‖b‖_∞` from separation alone.
    pub b_closed_form: f64,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub measure: AtomicMeasure,
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
    pub n: usize,
    pub bounds: SolveBounds,
    spec: DirichletSpec,
}

fn inf_norm(m: &DMatrix<f64>) -> f64 {
    m.row_iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Solve the interpolation system.
pub fn solve_certificate(m: &AtomicMeasure) -> Result<Certificate> {
    if m.is_empty() {
        return Err(Error::InvalidMeasure("measure has no atoms".into()));
    }
    let g = m.gershgorin_estimate();
    if !(g < 1.0) {
        return Err(Error::SeparationTooSmall { bound: g });
    }
    let spec = DirichletSpec::centered(m.n);
    let c = spec.second_deriv_at_zero().abs().sqrt();
    let (mat, rhs) = build_system(m);
    let sol = mat.lu().solve(&rhs).ok_or(Error::SingularSystem)?;
    if sol.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::SingularSystem);
    }
    let s = m.len();
    let a: Vec<Complex64> = (0..s).map(|j| sol[j]).collect();
    let b: Vec<Complex64> = (0..s).map(|j| sol[s + j] / c).collect();

    let [d0, d1, d2] = kernel_blocks(m, &spec);
    let d2_inv = d2.clone().try_inverse().ok_or(Error::SingularSystem)?;
    let d2i_d1 = &d2_inv * &d1;
    let schur = &d0 - &d1 * &d2i_d1;
    let schur_inv = schur.try_inverse().ok_or(Error::SingularSystem)?;
    let v_inf = m.atoms.iter().map(|a| a.sign.norm()).fold(0.0, f64::max);
    let beta_bound = c * inf_norm(&d2i_d1) * inf_norm(&schur_inv) * v_inf;

    let (eps1, b_closed_form) = if s < 2 {
        (0.0, 0.0)
    } else {
        let l = (s as f64).ln();
        let nd = m.n as f64 * m.separation();
        let r2 = 9.0 * l / (4.0 * nd);
        let e1 = l / (4.0 * nd) + (3f64.sqrt() * l / nd).powi(2) / (1.0 - r2);
        (e1, e1 / (1.0 - r2) * (3f64.sqrt() * l / nd).powi(2) / c)
    };
    let bounds = SolveBounds {
        gershgorin: g,
        a_inf: a.iter().map(|z| z.norm()).fold(0.0, f64::max),
        b_scaled_inf: c * b.iter().map(|z| z.norm()).fold(0.0, f64::max),
        eps1,
        beta_bound,
        b_closed_form,
    };
    Ok(Certificate { measure: m.clone(), a, b, n: m.n, bounds, spec })
}

impl Certificate {
    /// `η^{(order)}(θ)` for order 0..=2.
    pub fn eval_eta(&self, theta: f64, order: u32) -> Complex64 {
        assert!(order <= 2, "η derivatives up to order 2");
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, atom) in self.measure.atoms.iter().enumerate() {
            let t = theta - atom.position;
            acc += self.a[j] * self.spec.deriv(t, order) + self.b[j] * self.spec.deriv(t, order + 1);
        }
        acc
    }

    /// Coefficients of `η` (order `n`):
    /// `c_k = (1/(2n+1)) Σ_j (a_j + 2πik b_j) e^{−2πikτ_j}`.
    pub fn eta_poly(&self) -> TrigPoly {
        let big_n = (2 * self.n + 1) as f64;
        TrigPoly::from_fn(self.n, |k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, atom) in self.measure.atoms.iter().enumerate() {
                let w = self.a[j] + Complex64::new(0.0, 2.0 * PI * k as f64) * self.b[j];
                acc += w * cis2pi(-(k as f64) * atom.position);
            }
            acc / big_n
        })
    }

    /// `(max_j |η(τ_j) − sign_j|, max_j |η'(τ_j)|)`.
    pub fn verify_interpolation(&self) -> (f64, f64) {
        let mut e0 = 0.0f64;
        let mut e1 = 0.0f64;
        for atom in &self.measure.atoms {
            e0 = e0.max((self.eval_eta(atom.position, 0) - atom.sign).norm());
            e1 = e1.max(self.eval_eta(atom.position, 1).norm());
        }
        (e0, e1)
    }

    /// Grid-plus-Bernstein certification that `|η| < 1` away from the atoms.
    ///
    /// Off the atom neighbourhoods (radius `1/(8n)`), on each grid cell
    /// `|η| ≤ max(|η_i|, |η_{i+1}|) + (h²/8)(2πn)²·sup|η|`, with
    /// `sup|η| ≤ max_i|η_i| / (1 − (h²/8)(2πn)²)`. Inside each neighbourhood
    /// `|η|²` is shown concave by sampling its second derivative on a finer
    /// grid with a Bernstein bound on the third.
    pub fn verify_bounded(&self, grid_mult: usize) -> BoundedReport {
        let n = self.n as f64;
        let m = grid_mult.max(1) * (2 * self.n + 1);
        let h = 1.0 / m as f64;
        let vals: Vec<f64> = (0..m)
            .into_par_iter()
            .map(|i| self.eval_eta(i as f64 * h, 0).norm())
            .collect();
        let grid_max = vals.iter().copied().fold(0.0, f64::max);
        let w = 2.0 * PI * n;
        let kappa = h * h / 8.0 * w * w;
        let sup_bound = if kappa < 1.0 { grid_max / (1.0 - kappa) } else { f64::INFINITY };
        let radius = 1.0 / (8.0 * n);
        let pos = self.measure.positions();
        let inside = |x: f64| pos.iter().any(|&p| torus_dist(x, p) <= radius);

        let mut sup_off = 0.0f64;
        let mut argmax = 0.0;
        for i in 0..m {
            let (x0, x1) = (i as f64 * h, (i + 1) as f64 * h);
            if inside(x0) && inside(x1) {
                continue;
            }
            let v = vals[i].max(vals[(i + 1) % m]) + kappa * sup_bound;
            if v > sup_off {
                sup_off = v;
                argmax = if vals[i] >= vals[(i + 1) % m] { x0 } else { x1.rem_euclid(1.0) };
            }
        }

        // concavity of g = |η|² around each atom
        let g3 = 8.0 * w.powi(3) * sup_bound * sup_bound;
        let h2 = 1.0 / (2000.0 * n);
        let steps = (2.0 * radius / h2).ceil() as usize;
        let mut worst_g2 = f64::NEG_INFINITY;
        for &p in &pos {
            let local = (0..=steps)
                .into_par_iter()
                .map(|k| {
                    let x = p - radius + k as f64 * (2.0 * radius / steps as f64);
                    let e0 = self.eval_eta(x, 0);
                    let e1 = self.eval_eta(x, 1);
                    let e2 = self.eval_eta(x, 2);
                    2.0 * (e1.norm_sqr() + (e0.conj() * e2).re)
                })
                .reduce(|| f64::NEG_INFINITY, f64::max);
            worst_g2 = worst_g2.max(local);
        }
        let concavity_slack = 0.5 * (2.0 * radius / steps as f64) * g3;
        let concave = worst_g2 + concavity_slack < 0.0;
        BoundedReport {
            sup_off_atom: sup_off,
            argmax: wrap_half(argmax).rem_euclid(1.0),
            certified: concave && sup_off < 1.0,
            grid_points: m,
            sup_bound,
            neighborhood_radius: radius,
            max_second_derivative: worst_g2,
            concavity_slack,
        }
    }
}

/// Serializable summary of a solved certificate.
#[derive(Clone, Debug, Serialize)]
pub struct CertifyReport {
    pub n: usize,
    pub atoms: usize,
    pub separation: f64,
    /// `max_j |η(τ_j) − sign_j|`
    pub interpolation_error: f64,
    /// `max_j |η'(τ_j)|`
    pub derivative_error: f64,
    /// `derivative_error / n²`
    pub derivative_error_scaled: f64,
    pub solve: SolveBounds,
    pub bounded: BoundedReport,
    pub a: Vec<[f64; 2]>,
    pub b: Vec<[f64; 2]>,
}

impl Certificate {
    /// Interpolation residuals, solve bounds and the boundedness check.
    pub fn report(&self, grid_mult: usize) -> CertifyReport {
        let (e0, e1) = self.verify_interpolation();
        let n2 = (self.n * self.n) as f64;
        CertifyReport {
            n: self.n,
            atoms: self.measure.len(),
            separation: self.measure.separation(),
            interpolation_error: e0,
            derivative_error: e1,
            derivative_error_scaled: e1 / n2,
            solve: self.bounds.clone(),
            bounded: self.verify_bounded(grid_mult),
            a: self.a.iter().map(|z| [z.re, z.im]).collect(),
            b: self.b.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundedReport {
    /// Certified upper bound on `|η|` outside the atom neighbourhoods.
    pub sup_off_atom: f64,
    pub argmax: f64,
    pub certified: bool,
    pub grid_points: usize,
    /// Certified bound on `sup |η|` over the whole torus.
    pub sup_bound: f64,
    pub neighborhood_radius: f64,
    /// Largest sampled `(|η|²)''` inside the neighbourhoods.
    pub max_second_derivative: f64,
    pub concavity_slack: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NeumannReport {
    /// `‖I − U*U/(2n+1)‖_∞` from the explicit atom matrix.
    pub dev_uu: f64,
    pub dev_uu_bound: f64,
    /// `‖D₀ − I‖_∞`
    pub bound_d0: f64,
    pub bound_d0_analytic: f64,
    /// `‖D₁‖_∞ / √|D''(0)|`
    pub bound_d1: f64,
    pub bound_d1_analytic: f64,
    /// `‖I + D₂/|D''(0)|‖_∞`
    pub bound_d2: f64,
    pub bound_d2_analytic: f64,
    pub operator_norm: f64,
    pub operator_norm_analytic: f64,
}

/// Measured block norms next to their separation-only bounds.
pub fn neumann_bounds(m: &AtomicMeasure) -> NeumannReport {
    let spec = DirichletSpec::centered(m.n);
    let big_n = 2 * m.n + 1;
    let s = m.len();
    let ni = m.n as i64;
    // U = [ψ(τ_1), …] with centered ψ_k(τ) = e^{2πikτ}
    let u = DMatrix::<Complex64>::from_fn(big_n, s, |r, j| {
        cis2pi((r as i64 - ni) as f64 * m.atoms[j].position)
    });
    let uu = u.adjoint() * &u / Complex64::new(big_n as f64, 0.0);
    let dev_uu = (0..s)
        .map(|j| {
            (0..s)
                .map(|k| (uu[(j, k)] - if j == k { Complex64::new(1.0, 0.0) } else { 0.0.into() }).norm())
                .sum::<f64>()
        })
        .fold(0.0, f64::max);
    let [d0, d1, d2] = kernel_blocks(m, &spec);
    let dpp = spec.second_deriv_at_zero().abs();
    let eye = DMatrix::<f64>::identity(s, s);
    let bound_d0 = inf_norm(&(&d0 - &eye));
    let bound_d1 = inf_norm(&d1) / dpp.sqrt();
    let bound_d2 = inf_norm(&(&eye + &d2 / dpp));
    let (l, nd, big_delta) = if s < 2 {
        (0.0, 1.0, 1.0)
    } else {
        ((s as f64).ln(), m.n as f64 * m.separation(), m.separation())
    };
    let a0 = l / (4.0 * nd);
    let a1 = 3f64.sqrt() * l / nd;
    let a2 = 9.0 * l / (4.0 * nd);
    NeumannReport {
        dev_uu,
        dev_uu_bound: 2.0 * l / (big_n as f64 * big_delta),
        bound_d0,
        bound_d0_analytic: a0,
        bound_d1,
        bound_d1_analytic: a1,
        bound_d2,
        bound_d2_analytic: a2,
        operator_norm: (bound_d0 + bound_d1).max(bound_d1 + bound_d2),
        operator_norm_analytic: (a0 + a1).max(a1 + a2),
    }
}
