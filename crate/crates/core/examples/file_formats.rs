// JSON documents for polynomials, polytopes and plans.

use bohr_harmonic::io::{self, Document, Kind};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let text = r#"[{"n": 1, "re": 1.0, "im": 0.0}, {"n": 6, "re": 0.5, "im": -0.5}]"#;
    let doc = io::from_str(Kind::Dirichlet, text)?;
    print!("{}", io::to_string(&doc));
    if let Document::Dirichlet(f) = &doc {
        println!("lifted: {:?}", f.bohr_lift()?.dense_terms());
    }
    let err = io::from_str(Kind::Torus, r#"{"dims": 1}"#).unwrap_err();
    println!("error: {err}");
    Ok(())
}

fn main() {
    run_example().unwrap();
}
