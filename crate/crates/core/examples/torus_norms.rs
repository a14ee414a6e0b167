// Norms of a sparse trigonometric polynomial on T^2 by grid, Monte Carlo and
// exact even-moment quadrature, plus a certified sup bound.

use bohr_harmonic::torus::{norm, sup_bound, Quadrature, TorusPolynomial};
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = TorusPolynomial::from_terms(
        2,
        [
            (vec![0, 0], Complex64::new(1.0, 0.0)),
            (vec![1, 0], Complex64::new(1.0, 0.0)),
            (vec![0, -2], Complex64::new(0.0, 0.5)),
        ],
    )?;
    let l2 = norm(&f, 2.0, &Quadrature::grid(16))?;
    println!("||f||_2 grid = {:.12}, from coefficients = {:.12}", l2.value, f.coeff_l2_sq().sqrt());
    let l4 = norm(&f, 4.0, &Quadrature::even_exact())?;
    let l1 = norm(&f, 1.0, &Quadrature::grid(256))?;
    let mc = norm(&f, 1.0, &Quadrature::monte_carlo(20_000, 1))?;
    println!("||f||_4 exact = {:.12}", l4.value);
    println!("||f||_1 grid = {:.6}, monte carlo = {:.6} +- {:.6}", l1.value, mc.value, mc.stderr);
    let s = sup_bound(&f, 128, bohr_harmonic::DEFAULT_BUDGET)?;
    println!("sup in [{:.6}, {:.6}]", s.lower, s.upper);
    assert!((l2.value - f.coeff_l2_sq().sqrt()).abs() < 1e-12);
    Ok(())
}

fn main() {
    run_example().unwrap();
}
