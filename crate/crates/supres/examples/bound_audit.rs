// Sample the closed-form bounds on F(s; θ) across all eleven subdomains.

use std::error::Error;

use supres::bound_audit::check_master_bounds;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let r = check_master_bounds(16, 550, 3)?;
    println!("{:<5} {:>7} {:>12} {:>12}", "dom", "samples", "max Re/bnd", "max Im/bnd");
    for d in &r.per_domain {
        println!("{:<5} {:>7} {:>12.4} {:>12.4}", d.domain.name(), d.samples, d.max_ratio_re, d.max_ratio_im);
    }
    println!("violations: {}, near misses: {}", r.violations.len(), r.near_violations.len());
    if !r.violations.is_empty() {
        return Err("bound violations found".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
