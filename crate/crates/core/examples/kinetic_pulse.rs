//! Kinetic run from a Gaussian pulse, printing diagnostics per snapshot.
//!
//! ```bash
//! cargo run --release --example kinetic_pulse
//! ```

use kinetic_chemotaxis::verification::{f_mass_drift, Diagnostics};
use kinetic_chemotaxis::{kinetic, parse_config, SimState};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = parse_config(
        "mode = kinetic
[grid]
n_x = 200
n_v = 16
[scheme]
t_end = 0.5
[initial]
preset = gaussian-pulse
background = 0.2
width = 0.05
amplitude = 1.0
[output]
snapshot_every = 20
",
    )?;
    let initial = cfg.initial_state()?;
    let mut diags = Vec::new();
    println!(
        "{:>8} {:>6} {:>14} {:>12} {:>12} {:>12}",
        "t", "step", "f-mass", "g-mass", "max f", "eq dist"
    );
    kinetic::run(&initial, &cfg.params, &cfg.scheme, &mut |s: &SimState| {
        let d = Diagnostics::of(s);
        println!(
            "{:>8.4} {:>6} {:>14.12} {:>12.6} {:>12.6} {:>12.3e}",
            d.t, d.step, d.f_mass, d.g_mass, d.f_inf, d.equilibrium_distance
        );
        diags.push(d);
        Ok(())
    })?;
    println!("relative f-mass drift: {:.2e}", f_mass_drift(&diags));
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
