//! Asymptotic-preserving behaviour: with eps = 1e-8 the step stays at the
//! transport limit and one step projects f onto the local equilibrium.
//!
//! ```bash
//! cargo run --release --example stiff_limit
//! ```

use kinetic_chemotaxis::kinetic::{cfl_timestep, step};
use kinetic_chemotaxis::parse_config;
use kinetic_chemotaxis::verification::equilibrium_distance;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for eps in [1e-1, 1e-3, 1e-8] {
        let text = format!(
            "mode = kinetic\n[params]\neps = {eps}\n[initial]\nwell_prepared = false\nperturbation = 0.4\n"
        );
        let cfg = parse_config(&text)?;
        let initial = cfg.initial_state()?;
        let dt = cfl_timestep(initial.grid(), initial.dx(), &cfg.params, &cfg.scheme);
        let next = step(&initial, &cfg.params, &cfg.scheme)?;
        println!(
            "eps = {eps:.0e}  dt = {dt:.2e}  equilibrium distance {:.3e} -> {:.3e}",
            equilibrium_distance(&initial.f),
            equilibrium_distance(&next.f)
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
