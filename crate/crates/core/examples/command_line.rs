// Driving the experiments through the command-line parser.

use bohr_harmonic::cli::run_args;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let rep = run_args(["bohr-harmonic", "criteria", "--family", "corollary35", "--J", "3"])?;
    print!("{}", rep.to_table());
    let rep = run_args(["bohr-harmonic", "transference", "--x", "30", "--n-max", "5000"])?;
    print!("{}", rep.to_csv()?);
    Ok(())
}

fn main() {
    run_example().unwrap();
}
