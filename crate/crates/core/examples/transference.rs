// A certified transference plan for g(n) = n, its separation scan, and the
// contraction of partial sums in H^4.

use bohr_harmonic::dirichlet::families::random;
use bohr_harmonic::transference::{
    beta_map, check_contraction, choose_q, verify_separation, CompletelyMultiplicative, DEFAULT_Q_CAP,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let plan = choose_q(&CompletelyMultiplicative::Identity, 100.0, DEFAULT_Q_CAP, bohr_harmonic::DEFAULT_BUDGET)?;
    println!("Q = {}, margin {:.3}", plan.q, plan.certificate.margin);
    println!("beta(6) = {}, beta(101) = {}", beta_map(&plan, 6)?, beta_map(&plan, 101)?);
    let sep = verify_separation(&plan, 20_000)?;
    println!("checked {} integers, {} violations", sep.checked, sep.violations.len());
    let r = check_contraction(&random(150, 2)?, &plan, 4.0)?;
    println!("||S f||_4 / ||f||_4 = {:.4} (bound {:.4})", r.ratio, r.bound);
    Ok(())
}

fn main() {
    run_example().unwrap();
}
