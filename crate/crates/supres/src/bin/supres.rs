//! Batch front-end: certificates, Gram verification, spectra, constants,
//! the bound audit and operator dumps.
//!
//! Results go to stdout as one JSON object; with `--out <dir>` the JSON and
//! any CSV tables are also written there. Exit status: 0 success,
//! 1 input error, 2 verification failure. Failures always print a JSON
//! object with an `error` member.

// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use supres::bound_audit::{audit_csv, check_master_bounds};
use supres::certificate::{solve_certificate, AtomicMeasure};
use supres::constants::{constants_report, fk_csv};
use supres::gram::assemble_and_verify;
use supres::qk_operator::{qk_dense_capped, structured_bytes};
use supres::spectrum::{spectrum_report, sweep_csv};
use supres::Error;

#[derive(Parser, Debug)]
#[command(name = "supres", version, about = "Dual certificates and spectral checks for atomic super-resolution")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// Directory receiving JSON and CSV artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// RNG seed for sampling and power-iteration start vectors.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Convergence tolerance for power iterations.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Memory cap in GiB for dense and structured operators.
    #[arg(long = "mem-cap-gb", global = true, default_value_t = 4.0)]
    mem_cap_gb: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the interpolating certificate for a JSON measure and check |η| < 1 off the atoms.
    Certify {
        /// JSON file `{"n": .., "atoms": [{"position": .., "sign": [re, im]}]}`
        #[arg(long)]
        measure: PathBuf,
        /// Boundedness grid size as a multiple of 2n+1 points
        #[arg(long = "grid-mult", default_value_t = 10)]
        grid_mult: usize,
    },
    /// Build the Gram matrix of 1 − |η|² and check positivity and the polynomial identity.
    Gram {
        /// JSON measure file, same format as for `certify`
        #[arg(long)]
        measure: PathBuf,
    },
    /// Extreme singular values of I − Q_K^∞ + P^∞ for one or more K.
    Spectrum {
        /// Truncation orders; the operator has size 2K+1
        #[arg(long = "K", required = true, num_args = 1..)]
        k: Vec<usize>,
    },
    /// C₁ fixed points, η* and the f(K) curve.
    Constants,
    /// Sample the closed-form bounds on F(s; θ).
    Audit {
        /// Kernel order n
        #[arg(long)]
        n: usize,
        /// Total sample count, split evenly across the subdomains
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
    /// Dense entries of Q_K^∞ as CSV `l1,l2,re,im`.
    QkDump {
        /// Truncation order; indices run over -K..=K
        #[arg(long = "K")]
        k: usize,
    },
}

enum Failure {
    Input(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

struct Outcome {
    json: Value,
    files: Vec<(&'static str, String)>,
    failures: Vec<String>,
}

fn error_json(kind: &str, message: &str) -> Value {
    json!({ "error": { "kind": kind, "message": message } })
}

fn read_measure(path: &Path) -> Result<AtomicMeasure, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(Error::InvalidMeasure(format!("{}: {e}", path.display()))))?;
    Ok(AtomicMeasure::from_json(&text)?)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize to JSON")
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let g = &cli.global;
    if !(g.tol > 0.0) {
        return Err(Error::DomainError(format!("--tol must be positive, got {}", g.tol)).into());
    }
    if !(g.mem_cap_gb > 0.0) {
        return Err(Error::DomainError("--mem-cap-gb must be positive".into()).into());
    }
    let cap = (g.mem_cap_gb * (1u64 << 30) as f64) as u64;
    let mut failures = Vec::new();
    let mut files = Vec::new();
    let json = match &cli.command {
        Command::Certify { measure, grid_mult } => {
            let m = read_measure(measure)?;
            let cert = solve_certificate(&m)?;
            let r = cert.report(*grid_mult);
            if r.interpolation_error > 1e-9 {
                failures.push(format!("interpolation error {:.3e} > 1e-9", r.interpolation_error));
            }
            if r.derivative_error_scaled > 1e-7 {
                failures.push(format!("derivative error {:.3e}·n² > 1e-7·n²", r.derivative_error_scaled));
            }
            if !r.bounded.certified {
                failures.push(format!("boundedness not certified (bound {:.6})", r.bounded.sup_off_atom));
            }
            let v = to_value(&r);
            files.push(("certify.json", String::new()));
            v
        }
        Command::Gram { measure } => {
            let m = read_measure(measure)?;
            let cert = solve_certificate(&m)?;
            let r = assemble_and_verify(&cert)?.summary();
            if !r.psd {
                failures.push(format!("Gram matrix not PSD (min eigenvalue {:.3e})", r.min_eig));
            }
            if r.sup_poly_err > 1e-8 {
                failures.push(format!("polynomial identity error {:.3e} > 1e-8", r.sup_poly_err));
            }
            files.push(("gram.json", String::new()));
            to_value(&r)
        }
        Command::Spectrum { k } => {
            let mut reports = Vec::new();
            for &kk in k {
                if kk == 0 {
                    return Err(Error::DomainError("K must be ≥ 1".into()).into());
                }
                let need = structured_bytes(kk);
                if need > cap {
                    return Err(Error::BudgetExceeded { needed: need, cap }.into());
                }
                let r = spectrum_report(kk, g.tol, g.seed)?;
                if !r.condition_holds {
                    failures.push(format!(
                        "K={kk}: sigma_min {:.6} − residual {:.2e} ≤ 0.5",
                        r.sigma_min, r.residual_min
                    ));
                }
                reports.push(r);
            }
            files.push(("spectrum.json", String::new()));
            files.push(("spectrum_sweep.csv", sweep_csv(&reports)?));
            if reports.len() == 1 {
                to_value(&reports[0])
            } else {
                json!({ "reports": to_value(&reports) })
            }
        }
        Command::Constants => {
            let r = constants_report()?;
            files.push(("constants.json", String::new()));
            files.push(("fK_samples.csv", fk_csv(&r.fk_samples)));
            to_value(&r)
        }
        Command::Audit { n, samples } => {
            let r = check_master_bounds(*n, *samples, g.seed)?;
            if !r.violations.is_empty() {
                failures.push(format!("{} bound violations beyond 2× slack", r.violations.len()));
            }
            files.push(("audit.json", String::new()));
            files.push(("audit.csv", audit_csv(&r)?));
            to_value(&r)
        }
        Command::QkDump { k } => {
            if *k > 200 {
                return Err(Error::DomainError(format!("qk-dump supports K ≤ 200, got {k}")).into());
            }
            let q = qk_dense_capped(*k, cap)?;
            let kk = *k as i64;
            let mut csv = String::from("l1,l2,re,im\n");
            for i in 0..q.nrows() {
                for j in 0..q.ncols() {
                    csv.push_str(&format!("{},{},{:.17e},{:.17e}\n", i as i64 - kk, j as i64 - kk, q[(i, j)], 0.0));
                }
            }
            files.push(("qk_dump.csv", csv));
            json!({ "K": k, "dim": q.nrows(), "entries": q.nrows() * q.ncols(), "csv": "qk_dump.csv" })
        }
    };
    Ok(Outcome { json, files, failures })
}

fn write_artifacts(dir: &Path, out: &Outcome, body: &str) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    for (name, content) in &out.files {
        let text = if name.ends_with(".json") { body } else { content.as_str() };
        let path = dir.join(name);
        std::fs::write(&path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn configure_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("SUPRES_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Failure::Input(Error::DomainError(format!("SUPRES_THREADS must be a positive integer, got {v:?}"))))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Io(e.to_string()))?;
    }
    Ok(())
}

fn fail(f: Failure) -> ExitCode {
    let v = match f {
        Failure::Input(e) => error_json(e.kind(), &e.to_string()),
        Failure::Io(m) => error_json("Io", &m),
    };
    println!("{}", serde_json::to_string_pretty(&v).expect("error JSON"));
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let text: Vec<&str> = msg
                .lines()
                .map(str::trim)
                .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
                .filter(|l| !l.is_empty())
                .collect();
            let text = text.join(" ");
            let text = text.trim_start_matches("error: ");
            println!("{}", serde_json::to_string_pretty(&error_json("Usage", text)).expect("error JSON"));
            return ExitCode::from(1);
        }
    };
    if let Err(f) = configure_threads() {
        return fail(f);
    }
    let out = match run(&cli) {
        Ok(o) => o,
        Err(f) => return fail(f),
    };
    let mut body = out.json.clone();
    let passed = out.failures.is_empty();
    if let Value::Object(map) = &mut body {
        map.insert("verification".into(), json!({ "passed": passed, "failures": out.failures }));
        if !passed {
            map.insert(
                "error".into(),
                json!({ "kind": "VerificationFailed", "message": out.failures.join("; ") }),
            );
        }
    }
    let text = serde_json::to_string_pretty(&body).expect("report JSON") + "\n";
    if let Some(dir) = &cli.global.out {
        if let Err(f) = write_artifacts(dir, &out, &text) {
            return fail(f);
        }
    } else if let Command::QkDump { .. } = cli.command {
        // without an output directory the table itself is the result
        if let Some((_, csv)) = out.files.first() {
            print!("{csv}");
            return if passed { ExitCode::SUCCESS } else { ExitCode::from(2) };
        }
    }
    print!("{text}");
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}
