// H^inf, Bloch and BMOA norms of the log-reciprocal polynomial.

use bohr_harmonic::dirichlet::families::log_reciprocal;
use bohr_harmonic::dirichlet::{bloch_norm, bmoa_carleson_norm, hinf_norm, CarlesonConfig, HinfConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = log_reciprocal(200)?;
    let h = hinf_norm(&f, &HinfConfig { samples: 4097, ..HinfConfig::default() })?;
    println!("||f||_inf in [{:.6}, {:.6}]", h.best_lower(), h.certified_upper());
    let b = bloch_norm(&f, 128, 10.0)?;
    println!("||f||_B = {:.6} at sigma = {:.4} (exact: {})", b.value, b.sigma, b.exact);
    let c = bmoa_carleson_norm(&f, &CarlesonConfig { offsets: 20, levels: 6, ..CarlesonConfig::default() })?;
    println!("Carleson box lower bound {:.6} at h = {}, t = {:.3}", c.value, c.h, c.t);
    Ok(())
}

fn main() {
    run_example().unwrap();
}
