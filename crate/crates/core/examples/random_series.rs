// Ultra-thin prime weights, Kahane ratios for prime sums, and the X
// functional over random signs.

use bohr_harmonic::bohr::PrimeSet;
use bohr_harmonic::randomseries::{
    bmoa_random_experiment, kahane_experiment, prime_sum, ultra_thin_weight, XConfig,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p0 = PrimeSet::explicit(vec![2, 3])?;
    for n in [10u64, 1000, 100_000] {
        println!("w_{n} = {:.6e}", ultra_thin_weight(&p0, n)?);
    }
    let f = prime_sum(30)?;
    let rows = kahane_experiment(&PrimeSet::All, &f, &[f.length()], 10, 0, bohr_harmonic::DEFAULT_BUDGET)?;
    println!("Kahane ratio for 30 primes: {:.4}", rows[0].ratio);
    let a = |n: u64| if n < 2 { 0.0 } else { 1.0 / ((n as f64).sqrt() * (n as f64).ln().powi(2)) };
    let cfg = XConfig { levels: 8, ..XConfig::default() };
    let r = bmoa_random_experiment(&p0, a, &[32, 64], 10, 0, &cfg)?;
    for row in &r.rows {
        println!("N = {}: mean X in [{:.5}, {:.5}]", row.n, row.mean_x_lower, row.mean_x_upper);
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
