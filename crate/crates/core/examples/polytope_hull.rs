// Lattice polytopes: hulls, facets as primitive affine functionals, lattice points.

use bohr_harmonic::polytope::LatticePolytope;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let square = LatticePolytope::hull(2, &[vec![0, 0], vec![2, 0], vec![0, 2], vec![2, 2], vec![1, 1]])?;
    println!("vertices {:?}", square.vertices());
    for f in square.facets() {
        println!("facet {:?} . alpha + {} >= 0", f.beta, f.b);
    }
    println!("{} lattice points", square.lattice_points().len());
    let ball = LatticePolytope::ball_hull(2, 2.0, bohr_harmonic::DEFAULT_BUDGET)?;
    println!("hull of the radius-2 ball: {} vertices, {} facets", ball.vertices().len(), ball.facets().len());
    Ok(())
}

fn main() {
    run_example().unwrap();
}
