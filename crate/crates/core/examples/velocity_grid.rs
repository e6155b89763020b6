//! Symmetric midpoint velocity grids and their discrete moments.
//!
//! ```bash
//! cargo run --example velocity_grid
//! ```

use kinetic_chemotaxis::VelocityGrid;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>4} {:>10} {:>10} {:>12}", "n_v", "|V|", "gamma^2", "<v^2>/|V|");
    for n_v in [2, 4, 8, 16, 64] {
        let grid = VelocityGrid::build_uniform_symmetric(1.0, n_v)?;
        let ones = vec![1.0; n_v];
        let second = grid.moment(&ones, 2)?;
        println!(
            "{n_v:>4} {:>10.6} {:>10.6} {:>12.6}",
            grid.measure(),
            grid.gamma_sq(),
            second / grid.measure()
        );
        // gamma^2 is |V| / <v^2>, so gamma^2 <v^2> = |V|
        assert!((grid.gamma_sq() * second - grid.measure()).abs() < 1e-14);
    }

    let grid = VelocityGrid::build_uniform_symmetric(2.0, 4)?;
    println!("nodes {:?}, weights {:?}", grid.nodes(), grid.weights());
    println!("node 0 mirrors node {}", grid.mirror(0));
    let odd: Vec<f64> = grid.nodes().to_vec();
    println!("first moment of v: {}", grid.moment(&odd, 1)?);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
