// L1 norms of the ball Dirichlet kernels and their growth in R.

use bohr_harmonic::torus::{dirichlet_kernel, kernel_scaling_experiment, norm, Quadrature};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let d11 = dirichlet_kernel(1.0, 1, bohr_harmonic::DEFAULT_BUDGET)?;
    let l1 = norm(&d11, 1.0, &Quadrature::grid(1 << 14))?.value;
    println!("||D_(1,1)||_1 = {l1:.8} (closed form {:.8})", 1.0 / 3.0 + 2.0 * 3f64.sqrt() / std::f64::consts::PI);
    let scaling = kernel_scaling_experiment(2, &[4.0, 8.0, 16.0], None, bohr_harmonic::DEFAULT_BUDGET)?;
    for r in &scaling.rows {
        println!("R = {:>4}  terms = {:>5}  ||D||_1 = {:.6}", r.radius, r.terms, r.l1);
    }
    println!("fitted slope {:.3}", scaling.slope);
    Ok(())
}

fn main() {
    run_example().unwrap();
}
