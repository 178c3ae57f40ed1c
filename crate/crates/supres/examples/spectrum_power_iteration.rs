// Extreme singular values of I − Q_K^∞ + P^∞ by power iteration with
// residual error bounds, for a small sweep of K.

use std::error::Error;

use supres::spectrum::{spectrum_sweep, sweep_csv};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let reports = spectrum_sweep(&[40, 100, 200], 1e-9, 1)?;
    print!("{}", sweep_csv(&reports)?);
    if let Some(bad) = reports.iter().find(|r| !r.condition_holds) {
        return Err(format!("σ_min > 0.5 fails at K = {}", bad.k).into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
