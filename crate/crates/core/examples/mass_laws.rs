//! Discrete g-mass against the closed form
//! `M_g(t) = (a/b) M_f0 (1 - e^{-b|V|t}) + M_g0 e^{-b|V|t}`,
//! and its first-order convergence in the step size.
//!
//! ```bash
//! cargo run --release --example mass_laws
//! ```

use kinetic_chemotaxis::kinetic::{cfl_timestep, step_with_dt};
use kinetic_chemotaxis::verification::{f_mass, g_mass, g_mass_closed_form};
use kinetic_chemotaxis::parse_config;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = parse_config("mode = kinetic\n[grid]\nn_x = 100\nn_v = 8\n[initial]\ns0 = 2.0\n")?;
    let initial = cfg.initial_state()?;
    let measure = initial.grid().measure();
    let (m_f0, m_g0) = (f_mass(&initial), g_mass(&initial));
    let base = cfl_timestep(initial.grid(), initial.dx(), &cfg.params, &cfg.scheme);

    let mut previous: Option<f64> = None;
    for level in 0..4 {
        let dt = base / f64::from(1 << level);
        let steps = 200 << level;
        let mut state = initial.clone();
        let mut worst: f64 = 0.0;
        for _ in 0..steps {
            state = step_with_dt(&state, &cfg.params, &cfg.scheme, dt)?;
            let exact = g_mass_closed_form(state.t, m_f0, m_g0, &cfg.params, measure);
            worst = worst.max((g_mass(&state) - exact).abs());
        }
        let ratio = previous.map(|p| format!("{:.3}", p / worst)).unwrap_or_default();
        println!("dt = {dt:.3e}  max deviation = {worst:.3e}  ratio {ratio}");
        previous = Some(worst);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
