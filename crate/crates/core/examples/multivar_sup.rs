// Sup norm of an analytic polynomial against its L^(n log d) norm.

use bohr_harmonic::torus::{multivar_sup_check, multivar_sup_constant, TorusPolynomial};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = TorusPolynomial::random(2, 4, 10, true, 5)?;
    let d = f.total_degree().max(2) as u32;
    let r = multivar_sup_check(&f, d, 64, bohr_harmonic::DEFAULT_BUDGET)?;
    println!(
        "sup <= {:.5}, ||F||_{:.3} = {:.5}, ratio {:.4} vs bound {:.4}",
        r.sup_upper,
        r.q,
        r.q_norm,
        r.ratio,
        multivar_sup_constant()
    );
    assert!(r.holds);
    Ok(())
}

fn main() {
    run_example().unwrap();
}
