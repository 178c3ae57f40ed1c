// Smallest non-structural eigenvalue of AÃ* for a two-atom support.

use std::error::Error;

use supres::certificate::AtomicMeasure;
use supres::gram::lambda_min_aatilde;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for d in [0.25, 0.3, 0.4, 0.5] {
        let m = AtomicMeasure::with_unit_signs(64, &[0.0, d])?;
        let r = lambda_min_aatilde(&m, 2 * 64 + 1)?;
        println!(
            "Δ = {d:.2}: λ_min = {:.6}, λ_max = {:.4}, null space {} (expected {})",
            r.lambda_min, r.lambda_max, r.null_dim, r.expected_null_dim
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
