//! Convergence of the kinetic moments toward the Cattaneo limit as eps -> 0,
//! with the report written as CSV to stdout.
//!
//! ```bash
//! cargo run --release --example eps_convergence
//! ```

use kinetic_chemotaxis::io::report::write_report;
use kinetic_chemotaxis::parse_config;
use kinetic_chemotaxis::verification::{eps_convergence_study, log_log_slope, spread};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = parse_config(
        "mode = convergence
[params]
mu0 = 5
[grid]
n_x = 100
n_v = 16
[scheme]
t_end = 1.0
",
    )?;
    let initial = cfg.initial_state()?;
    let report = eps_convergence_study(&initial, &cfg.params, &cfg.scheme, &cfg.eps_list)?;
    write_report(&report, std::io::stdout().lock())?;
    println!("error ratios: {:?}", report.error_ratios());
    println!(
        "equilibrium-distance slope: {:.3}",
        log_log_slope(&report.eps_values, &report.equilibrium_distance)
    );
    println!("energy-exponent spread: {:.3}", spread(&report.energy_exponent));
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
