//! Writes a kinetic trajectory as snapshot CSVs, reads it back bitwise, and
//! runs the trajectory checks used by `kinchemo verify`.
//!
//! ```bash
//! cargo run --release --example snapshots
//! ```

use kinetic_chemotaxis::cli::{simulate_kinetic, verify_snapshots};
use kinetic_chemotaxis::io::snapshot::{load_trajectory, read_snapshot, write_snapshot, Snapshot};
use kinetic_chemotaxis::parse_config;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let text = format!(
        "mode = kinetic
[grid]
n_x = 64
n_v = 8
[scheme]
t_end = 0.25
[initial]
preset = cosine
amplitude = 0.3
s0 = 1.0
[output]
dir = {}
snapshot_every = 10
full_fields = true
",
        dir.path().display()
    );
    let cfg = parse_config(&text)?;
    let last = simulate_kinetic(&cfg)?;

    let snap = Snapshot::from_state(&last, true)?;
    let mut buf = Vec::new();
    write_snapshot(&snap, &mut buf)?;
    assert_eq!(read_snapshot(buf.as_slice())?, snap);

    let trajectory = load_trajectory(dir.path())?;
    println!("{} snapshots, last at t = {}", trajectory.len(), trajectory.last().unwrap().t());
    for check in verify_snapshots(&cfg, &trajectory)? {
        println!("{} {}: {}", if check.passed { "PASS" } else { "FAIL" }, check.name, check.detail);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
