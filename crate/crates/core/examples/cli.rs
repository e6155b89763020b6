//! Drives the command-line interface in-process: simulate, verify, and an
//! eps sweep, printing each exit code.
//!
//! ```bash
//! cargo run --release --example cli
//! ```

use kinetic_chemotaxis::cli;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let config = dir.path().join("run.cfg");
    std::fs::write(
        &config,
        "mode = kinetic\n[grid]\nn_x = 50\nn_v = 8\n[scheme]\nt_end = 0.2\n[output]\nfull_fields = true\n",
    )?;
    let out = dir.path().join("out");
    let (config, out) = (config.to_str().unwrap(), out.to_str().unwrap());
    for command in [
        vec!["simulate-kinetic", "--config", config, "--out", out],
        vec!["verify", "--config", config, "--out", out],
        vec!["simulate-cattaneo", "--config", config, "--out", out],
        vec!["verify", "--config", config, "--out", out],
        vec!["convergence", "--config", config, "--out", out, "--eps-list", "0.2,0.1"],
    ] {
        let code = cli::main(std::iter::once("kinchemo").chain(command.iter().copied()));
        println!("kinchemo {} -> exit {code}", command[0]);
        if code != cli::EXIT_OK {
            return Err(format!("{} failed with exit code {code}", command[0]).into());
        }
    }
    println!("{}", std::fs::read_to_string(dir.path().join("out/convergence.csv"))?);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
