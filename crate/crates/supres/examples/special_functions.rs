// Sine/cosine integrals, Γ(0, ix) and both real Lambert W branches.

use std::error::Error;

use supres::specfun::{ci, gamma0_imag, lambert_w, si, solve_loglinear, Branch};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for &x in &[0.5, std::f64::consts::PI, 40.0] {
        println!("x = {x:<8.4} Si = {:.15}  Ci = {:.15}  Γ(0, ix) = {:.12}", si(x), ci(x)?, gamma0_imag(x)?);
    }
    let x = -0.2;
    println!("W₀({x}) = {:.15}, W₋₁({x}) = {:.15}", lambert_w(Branch::Principal, x)?, lambert_w(Branch::Lower, x)?);
    // x − 10 ln x − 3 = 0
    let r = solve_loglinear(1.0, -10.0, -3.0)?;
    println!("roots of x − 10 ln x − 3: {:.9} and {:.9}", r.x0, r.x_m1.unwrap_or(f64::NAN));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
