// Lifting a polynomial through the facets of a polytope containing its
// spectrum preserves L^p norms.

use bohr_harmonic::lift::{lift_from_polytope, verify_isometry};
use bohr_harmonic::polytope::LatticePolytope;
use bohr_harmonic::torus::{Quadrature, TorusPolynomial};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = TorusPolynomial::random(2, 2, 5, false, 11)?;
    let support: Vec<Vec<i64>> = f.dense_terms().into_iter().map(|t| t.0).collect();
    let e = LatticePolytope::hull(2, &support)?;
    let lift = lift_from_polytope(&f, &e)?;
    println!("lifted to T^{} with shift {}", lift.dims, lift.shift);
    let exact = verify_isometry(&f, &lift.g, 2.0, &Quadrature::even_exact())?;
    println!("p = 2: {:.12} vs {:.12}", exact.f_norm.value, exact.g_norm.value);
    let grid = verify_isometry(&f, &lift.g, 1.0, &Quadrature::grid(32))?;
    println!("p = 1: {:.6} vs {:.6}", grid.f_norm.value, grid.g_norm.value);
    Ok(())
}

fn main() {
    run_example().unwrap();
}
