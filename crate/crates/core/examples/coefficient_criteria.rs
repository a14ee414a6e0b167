// Coefficient criteria for nonnegative coefficients computed at exact breakpoints.

use bohr_harmonic::dirichlet::families::corollary35;
use bohr_harmonic::dirichlet::{bloch_criterion, fefferman_s, prime_bmoa_criterion, DirichletPolynomial};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = DirichletPolynomial::from_real([(3, 1.0), (5, 1.0)])?;
    let s = fefferman_s(&f)?;
    println!("S(3^-s + 5^-s)^2 = {} at x = {}", s.value * s.value, s.argmax_x);
    let g = corollary35(3, bohr_harmonic::DEFAULT_BUDGET)?;
    println!("corollary35(J = 3): {} prime terms", g.len());
    println!("  fefferman S      {:.6}", fefferman_s(&g)?.value);
    println!("  bloch criterion  {:.6}", bloch_criterion(&g)?.value);
    println!("  prime criterion  {:.6}", prime_bmoa_criterion(&g)?.value);
    Ok(())
}

fn main() {
    run_example().unwrap();
}
