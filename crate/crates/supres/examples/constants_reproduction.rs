// The C₁ fixed points, the root η* and samples of the f(K) curve.

use std::error::Error;

use supres::constants::constants_report;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let r = constants_report()?;
    println!("C₁ fixed points: {:.6} and {:.4}", r.c1_root_small, r.c1_root_large);
    println!("Lambert-W parameters r = ({:.4}, {:.4}, {:.6e})", r.r1, r.r2, r.r3);
    println!("η* = {:.7}", r.eta_star);
    for (k, f) in &r.fk_samples {
        println!("f({k:.0e}) = {f:.6e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
