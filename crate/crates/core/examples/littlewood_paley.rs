// Monte Carlo checks of the Littlewood-Paley identity and Helson's inequality.

use bohr_harmonic::dirichlet::families::random;
use bohr_harmonic::dirichlet::{helson_check, littlewood_paley_check, DirichletPolynomial};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = random(10, 4)?;
    let lp = littlewood_paley_check(&f, 50_000, 4)?;
    println!(
        "sum |a_n|^2 = {:.5}, estimate {:.5} +- {:.5} ({:.2}% off)",
        lp.lhs,
        lp.estimate,
        lp.stderr,
        100.0 * lp.relative_error()
    );
    let g = DirichletPolynomial::from_real([(2, 1.0), (3, 1.0)])?;
    let h = helson_check(&g, 100_000, 1)?;
    println!("||2^-s + 3^-s||_1 = {:.5} +- {:.5} vs rhs {:.5}", h.lhs.value, h.lhs.stderr, h.rhs);
    Ok(())
}

fn main() {
    run_example().unwrap();
}
