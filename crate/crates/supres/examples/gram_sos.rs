// Write 1 − |η|² as a Hermitian sum of squares ψ*Qψ with Q ⪰ 0.

use std::error::Error;

use supres::certificate::{solve_certificate, AtomicMeasure};
use supres::gram::assemble_and_verify;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let measure = AtomicMeasure::with_unit_signs(128, &[0.1, 0.5])?;
    let cert = solve_certificate(&measure)?;
    let report = assemble_and_verify(&cert)?.summary();
    println!("{}", serde_json::to_string_pretty(&report)?);
    if !report.psd {
        return Err("Gram matrix is not PSD".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
