// Dirichlet polynomials and their Bohr lift: evaluation, Dirichlet
// convolution, and the exact H^4 norm of 2^-s + 3^-s.

use bohr_harmonic::dirichlet::{hq_norm, DirichletPolynomial};
use bohr_harmonic::torus::Quadrature;
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = DirichletPolynomial::from_real([(2, 1.0), (3, 1.0)])?;
    println!("f(1) = {}", f.d_eval(Complex64::new(1.0, 0.0)));
    let lift = f.bohr_lift()?;
    for (alpha, c) in lift.dense_terms() {
        println!("  {c} z^{alpha:?}");
    }
    let sq = f.mul(&f, bohr_harmonic::DEFAULT_BUDGET)?;
    println!("f^2 coefficients: {:?}", sq.terms().iter().map(|t| (t.0, t.1.re)).collect::<Vec<_>>());
    let h4 = hq_norm(&f, 4.0, &Quadrature::even_exact())?;
    let mc = hq_norm(&f, 4.0, &Quadrature::monte_carlo(50_000, 2))?;
    println!("||f||_4^4 = {:.12} exactly, {:.4} by Monte Carlo", h4.value.powi(4), mc.value.powi(4));
    Ok(())
}

fn main() {
    run_example().unwrap();
}
