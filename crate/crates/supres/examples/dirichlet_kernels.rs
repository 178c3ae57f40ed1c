// Evaluate the centered Dirichlet kernel and its derivatives, and truncate a
// trigonometric polynomial with an error estimate.

use std::error::Error;

use supres::trigpoly::{dirichlet_truncate, DirichletSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let spec = DirichletSpec::centered(32);
    for &t in &[0.0, 1e-4, 0.01, 0.25] {
        println!(
            "θ = {t:<6}  D = {:.12}  D' = {:.6e}  D'' = {:.6e}",
            spec.eval(t).re,
            spec.deriv(t, 1),
            spec.deriv(t, 2)
        );
    }
    let p = spec.shifted_poly(0.3);
    let (p8, err) = dirichlet_truncate(&p, 8)?;
    println!("truncated to order {}: discarded part has ℓ² norm {:.3e}", p8.order(), err.norm2());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
