// Riesz projection norms: a 1-D desk check against 1/sin(pi/p) and a small
// random search for large ||P+ f||_p / ||f||_inf.

use bohr_harmonic::torus::{norm, projection_ratio_search, Quadrature, SearchConfig, TorusPolynomial};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = TorusPolynomial::random(1, 8, 12, false, 3)?;
    for p in [4.0 / 3.0, 2.0, 4.0] {
        let q = Quadrature::grid(4096);
        let ratio = norm(&f.riesz_project(), p, &q)?.value / norm(&f, p, &q)?.value;
        println!("p = {p:.3}: ||P+ f||_p / ||f||_p = {ratio:.5} <= {:.5}", 1.0 / (std::f64::consts::PI / p).sin());
    }
    let mut cfg = SearchConfig::new(4.0, 1, 3);
    cfg.iterations = 40;
    cfg.starts = 2;
    let best = projection_ratio_search(&cfg)?;
    println!("best ratio found for p = 4: {:.5} over {} evaluations", best.ratio, best.evaluations);
    Ok(())
}

fn main() {
    run_example().unwrap();
}
