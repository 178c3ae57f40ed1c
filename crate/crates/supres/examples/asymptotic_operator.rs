// Entries of the limiting operator Q_K^∞ and the FFT matvec of
// I − Q_K^∞ + P^∞ checked against its dense form.

use std::error::Error;

use num_complex::Complex64;
use supres::qk_operator::{dense_operator, qk_entry, AsymptoticOperator};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let k = 100;
    for (a, b) in [(0, 0), (1, 0), (1, 3), (-3, 5), (2, 7)] {
        println!("Q^∞[{a:>2}, {b:>2}] = {:+.15}", qk_entry(k, a, b)?.re);
    }
    let op = AsymptoticOperator::new(k);
    let dense = dense_operator(k)?;
    let x: Vec<Complex64> = (0..op.dim()).map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.7).cos())).collect();
    let fast = op.matvec(&x);
    let mut gap = 0.0f64;
    for i in 0..op.dim() {
        let slow: Complex64 = (0..op.dim()).map(|j| x[j] * dense[(i, j)]).sum();
        gap = gap.max((slow - fast[i]).norm());
    }
    println!("K = {k}: FFT length {}, matvec vs dense max gap {gap:.2e}", op.fft_len());
    if gap > 1e-11 {
        return Err("matvec disagrees with the dense operator".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
