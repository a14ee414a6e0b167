// Norm ratios on D_N and the Bernstein and shift inequalities.

use bohr_harmonic::compare::{bernstein_check, ratio_table, shift_check, CompareConfig, CompareFamily};
use bohr_harmonic::dirichlet::families::random;
use bohr_harmonic::dirichlet::HinfConfig;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = CompareConfig { bmoa_max_terms: 0, ..CompareConfig::default() };
    for row in ratio_table(CompareFamily::LogReciprocal, &[1000, 100_000], &cfg)? {
        println!(
            "N = {:>7}: ||f||_inf / ||f||_B = {:.4}, log log N = {:.4}",
            row.n, row.sup_over_bloch, row.log_log_n
        );
    }
    let hinf = HinfConfig { samples: 4097, ..HinfConfig::default() };
    let f = random(50, 9)?;
    let b = bernstein_check(&f, &hinf)?;
    println!("||f'|| >= {:.4}, log N ||f|| <= {:.4}", b.derivative_lower, b.log_n * b.sup_upper);
    let s = shift_check(&f, 0.5, &hinf)?;
    println!("||f|| >= {:.4}, shifted bound {:.4}", s.sup_lower, s.rhs);
    Ok(())
}

fn main() {
    run_example().unwrap();
}
