// Minimal inner truncation K₁ meeting each tail-bound threshold at K = 1e13.

use std::error::Error;

use supres::qk_operator::truncation_budget;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let r = truncation_budget(1e13, 1.0);
    println!("{:<5} {:>10} {:>12} {:>14}", "bound", "threshold", "reference K₁", "doubling K₁");
    for e in &r.entries {
        println!("{:<5} {:>10.0e} {:>12.3e} {:>14.3e}", e.name, e.threshold, e.reference_k1, e.found_k1);
    }
    println!("largest K₁ needed: {:.3e} (feasible: {})", r.k1_required, r.feasible);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
