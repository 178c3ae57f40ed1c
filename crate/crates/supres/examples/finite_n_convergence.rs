// The finite-n single-atom operator approaches its n → ∞ limit.

use std::error::Error;

use supres::qk_operator::{qk_dense, qk_finite_n};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let k = 20;
    let limit = qk_dense(k)?;
    for n in [250, 500, 1000, 2000] {
        let gap = (qk_finite_n(k, n)? - &limit).abs().max();
        println!("n = {n:>5}: max |Q_K(n) − Q_K^∞| = {gap:.3e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
