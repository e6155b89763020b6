//! Local equilibrium `F = (n + gamma^2 J v) / |V|`, its moments, and the
//! symmetric/antisymmetric split used by the energy estimate.
//!
//! ```bash
//! cargo run --example equilibrium
//! ```

use kinetic_chemotaxis::state::{equilibrium, sym_antisym_split};
use kinetic_chemotaxis::verification::CauchySchwarz;
use kinetic_chemotaxis::VelocityGrid;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let grid = VelocityGrid::build_uniform_symmetric(1.0, 16)?;
    let (n, j) = (1.5, 0.2);
    let f = equilibrium(n, j, &grid);
    println!("<F>     = {:.15} (n = {n})", grid.moment(&f, 0)?);
    println!("<v F>   = {:.15} (J = {j})", grid.moment(&f, 1)?);
    println!(
        "<v^2 F> = {:.15} (n / gamma^2 = {:.15})",
        grid.moment(&f, 2)?,
        n / grid.gamma_sq()
    );

    let profile: Vec<f64> = grid.nodes().iter().map(|v| (3.0 * v).exp()).collect();
    let (even, odd) = sym_antisym_split(&profile, &grid)?;
    println!("mass of odd part  = {:e}", grid.moment(&odd, 0)?);
    println!("flux of even part = {:e}", grid.moment(&even, 1)?);

    let cs = CauchySchwarz::of(&profile, &grid)?;
    println!("(<h>)^2 = {:.6} <= |V| <h^2> = {:.6}", cs.density.0, cs.density.1);
    println!("(<v h>)^2 = {:.6} <= |V|/gamma^2 <h^2> = {:.6}", cs.flux.0, cs.flux.1);
    assert!(cs.holds(4.0));
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
