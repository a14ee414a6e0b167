// Partial sums of random smooth Dirichlet polynomials against sqrt(pi_0(N) log log N).

use bohr_harmonic::bohr::PrimeSet;
use bohr_harmonic::transference::smooth_partial_ratio;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p0 = PrimeSet::explicit(vec![2, 3, 5])?;
    let r = smooth_partial_ratio(&p0, 2000, 5000, 3, 1)?;
    for row in &r.rows {
        println!("trial {}: {} terms, ratio {:.4}", row.trial, row.terms, row.ratio);
    }
    println!("scale {:.4}, observed constant {:.4}", r.scale, r.observed_c);
    Ok(())
}

fn main() {
    run_example().unwrap();
}
