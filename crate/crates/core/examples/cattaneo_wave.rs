//! Macroscopic solver on the standing wave `n = cos(2 pi x) cos(2 pi t / gamma)`
//! (no taxis, no turning): L2 error and observed order under refinement.
//!
//! ```bash
//! cargo run --release --example cattaneo_wave
//! ```

use std::f64::consts::PI;
use std::sync::Arc;

use kinetic_chemotaxis::cattaneo::{cattaneo_timestep, step_cattaneo_with_dt};
use kinetic_chemotaxis::kinetic::uniform_steps;
use kinetic_chemotaxis::{CattaneoState, KineticField, PhysParams, SchemeConfig, VelocityGrid};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Arc::new(VelocityGrid::build_uniform_symmetric(1.0, 16)?);
    let gamma = grid.gamma_sq().sqrt();
    let params = PhysParams {
        mu1: 0.0,
        ..PhysParams::default().with_chi(0.0)
    };
    let t_end = 0.5;
    let mut previous: Option<f64> = None;
    for n_x in [50, 100, 200, 400] {
        let dx = 1.0 / n_x as f64;
        let xs: Vec<f64> = (0..n_x).map(|i| (i as f64 + 0.5) * dx).collect();
        let n0 = xs.iter().map(|x| (2.0 * PI * x).cos()).collect();
        let g = KineticField::zeros(n_x, dx, Arc::clone(&grid))?;
        let mut state = CattaneoState::new(n0, vec![0.0; n_x], g)?;
        let (count, dt) = uniform_steps(t_end, cattaneo_timestep(&state, &params, &SchemeConfig::default()));
        for _ in 0..count {
            state = step_cattaneo_with_dt(&state, &params, dt)?;
        }
        let err = (xs
            .iter()
            .zip(&state.n)
            .map(|(x, n)| (n - (2.0 * PI * x).cos() * (2.0 * PI * t_end / gamma).cos()).powi(2))
            .sum::<f64>()
            * dx)
            .sqrt();
        let order = previous.map(|p| format!("{:.3}", (p / err).log2())).unwrap_or_default();
        println!("dx = 1/{n_x:<4} error {err:.3e}  order {order}");
        previous = Some(err);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
