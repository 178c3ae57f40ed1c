// Build the interpolating polynomial η for a random signed measure and
// certify that it interpolates the signs and stays below 1 elsewhere.

use std::error::Error;

use supres::certificate::{solve_certificate, AtomicMeasure};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let n = 128;
    let measure = AtomicMeasure::random(n, 3, 0.2, 7)?;
    println!("measure: {}", measure.to_json());
    let cert = solve_certificate(&measure)?;
    let report = cert.report(10);
    println!(
        "interpolation error {:.2e}, |η'| at atoms {:.2e}",
        report.interpolation_error, report.derivative_error
    );
    println!(
        "certified sup |η| off atoms ≤ {:.6} ({})",
        report.bounded.sup_off_atom,
        if report.bounded.certified { "certified" } else { "NOT certified" }
    );
    if !report.bounded.certified {
        return Err("boundedness not certified".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
