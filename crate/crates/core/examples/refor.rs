// The tensor kernel construction: dimension precondition and growth exponent.

use bohr_harmonic::torus::refor_growth;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    assert!(refor_growth(1.5, 3, &[4.0, 8.0]).is_err());
    let g = refor_growth(1.5, 4, &[4.0, 8.0, 16.0])?;
    for (r, v) in &g.rows {
        println!("R = {r:>4}  ||f~||_q = {v:.6}");
    }
    println!("exponent {:.3}, expected {:.3}", g.exponent, g.target);
    Ok(())
}

fn main() {
    run_example().unwrap();
}
