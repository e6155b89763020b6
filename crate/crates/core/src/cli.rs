//! Command-line front end.
//!
//! Exit codes: 0 success, 1 configuration or input error, 2 numerical
//! failure (non-finite values, negative density where forbidden), 3 failed
//! verification.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::cattaneo::{run_cattaneo, CattaneoState};
use crate::error::{Error, Result};
use crate::io::config::{parse_config, parse_eps_list, Mode, RunConfig};
use crate::io::report::write_report;
use crate::io::snapshot::{load_trajectory, save_snapshot, Snapshot};
use crate::kinetic::{cfl_timestep, run, uniform_steps};
use crate::state::SimState;
use crate::verification::{
    eps_convergence_study, f_mass_drift, g_mass_error_bound, g_mass_law_error, linf_bound_check,
    CauchySchwarz, Diagnostics,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "kinchemo", version, about = "Kinetic chemotaxis simulator and verifier")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the kinetic solver and write snapshots.
    SimulateKinetic(Common),
    /// Run the Cattaneo limit solver from the moments of the initial data.
    SimulateCattaneo(Common),
    /// Sweep eps and write convergence.csv.
    Convergence {
        #[command(flatten)]
        common: Common,
        /// Comma-separated, strictly decreasing eps values.
        #[arg(long, value_name = "LIST")]
        eps_list: Option<String>,
    },
    /// Check the recorded trajectory in the output directory.
    Verify(Common),
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long, value_name = "FILE")]
    config: PathBuf,
    /// Overrides `[output] dir`.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

/// Maps an error to its exit code.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Verification(_) => EXIT_VERIFICATION,
        e if e.is_numerical() => EXIT_NUMERICAL,
        Error::Cfl { .. } => EXIT_NUMERICAL,
        _ => EXIT_CONFIG,
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// `expected = None` accepts any mode (verify reads the output of any run).
fn load(common: &Common, expected: Option<Mode>) -> Result<RunConfig> {
    let text = fs::read_to_string(&common.config).map_err(|e| Error::io(&common.config, e))?;
    let mut cfg = parse_config(&text)?;
    if let Some(expected) = expected.filter(|m| *m != cfg.mode) {
        log::warn!(
            "config mode is {:?} but the {:?} command was requested",
            cfg.mode,
            expected
        );
    }
    if let Some(out) = &common.out {
        cfg.output.dir = out.clone();
    }
    Ok(cfg)
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::SimulateKinetic(common) => {
            let cfg = load(&common, Some(Mode::Kinetic))?;
            let last = simulate_kinetic(&cfg)?;
            println!(
                "kinetic run finished: t = {}, steps = {}, snapshots in {}",
                last.t,
                last.step_count,
                cfg.output.dir.display()
            );
            Ok(())
        }
        Command::SimulateCattaneo(common) => {
            let cfg = load(&common, Some(Mode::Cattaneo))?;
            let last = simulate_cattaneo(&cfg)?;
            println!(
                "cattaneo run finished: t = {}, steps = {}, snapshots in {}",
                last.t,
                last.step_count,
                cfg.output.dir.display()
            );
            Ok(())
        }
        Command::Convergence { common, eps_list } => {
            let mut cfg = load(&common, Some(Mode::Convergence))?;
            if let Some(list) = eps_list {
                cfg.eps_list =
                    parse_eps_list(&list).map_err(|m| Error::param("eps-list", m))?;
            }
            let path = convergence(&cfg)?;
            println!("convergence report written to {}", path.display());
            Ok(())
        }
        Command::Verify(common) => {
            let cfg = load(&common, None)?;
            let snaps = load_trajectory(&cfg.output.dir)?;
            let checks = verify_snapshots(&cfg, &snaps)?;
            let mut failed = 0;
            for c in &checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                failed += usize::from(!c.passed);
            }
            if failed > 0 {
                return Err(Error::Verification(format!(
                    "{failed} of {} checks failed",
                    checks.len()
                )));
            }
            Ok(())
        }
    }
}

/// Creates `dir` and removes snapshots left by an earlier run.
pub fn prepare_output_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
        if name.starts_with("snapshot_") && name.ends_with(".csv") {
            fs::remove_file(&path).map_err(|e| Error::io(&path, e))?;
        }
    }
    Ok(())
}

pub fn simulate_kinetic(cfg: &RunConfig) -> Result<SimState> {
    let initial = cfg.initial_state()?;
    prepare_output_dir(&cfg.output.dir)?;
    let dir = cfg.output.dir.clone();
    let full = cfg.output.full_fields;
    run(&initial, &cfg.params, &cfg.scheme, &mut |s: &SimState| {
        save_snapshot(&dir, &Snapshot::from_state(s, full)?).map(|_| ())
    })
}

/// Snapshots of the limit carry `f = F_{n,J}`.
pub fn simulate_cattaneo(cfg: &RunConfig) -> Result<CattaneoState> {
    let initial = CattaneoState::from_kinetic(&cfg.initial_state()?);
    prepare_output_dir(&cfg.output.dir)?;
    let dir = cfg.output.dir.clone();
    let full = cfg.output.full_fields;
    run_cattaneo(&initial, &cfg.params, &cfg.scheme, &mut |s| {
        let mut kinetic = SimState::new(s.reconstruct_f(), s.g.clone())?;
        kinetic.t = s.t;
        kinetic.step_count = s.step_count;
        save_snapshot(&dir, &Snapshot::from_state(&kinetic, full)?).map(|_| ())
    })
}

pub fn convergence(cfg: &RunConfig) -> Result<PathBuf> {
    let initial = cfg.initial_state()?;
    let report = eps_convergence_study(&initial, &cfg.params, &cfg.scheme, &cfg.eps_list)?;
    fs::create_dir_all(&cfg.output.dir).map_err(|e| Error::io(&cfg.output.dir, e))?;
    let path = cfg.output.dir.join("convergence.csv");
    let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
    write_report(&report, std::io::BufWriter::new(file))?;
    Ok(path)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Mass, bound and Cauchy-Schwarz checks on a recorded trajectory. The step
/// size is recomputed from the configuration exactly as the solver chose it.
pub fn verify_snapshots(cfg: &RunConfig, snaps: &[Snapshot]) -> Result<Vec<CheckOutcome>> {
    let Some(first) = snaps.first() else {
        return Err(Error::Verification(format!(
            "no snapshots found in {}",
            cfg.output.dir.display()
        )));
    };
    let grid = cfg.grid.velocity_grid()?;
    let diags: Vec<Diagnostics> = snaps.iter().map(|s| s.diagnostics).collect();
    let mut checks = Vec::new();

    let ordered = first.step() == 0 && snaps.windows(2).all(|w| w[1].t() > w[0].t());
    checks.push(CheckOutcome {
        name: "trajectory",
        passed: ordered,
        detail: format!("{} snapshots from step {}", snaps.len(), first.step()),
    });

    let finite = snaps.iter().all(|s| {
        [&s.n, &s.j, &s.s, &s.q]
            .iter()
            .all(|v| v.iter().all(|x| x.is_finite()))
    });
    checks.push(CheckOutcome {
        name: "finite",
        passed: finite,
        detail: "all stored moments finite".into(),
    });

    let drift = f_mass_drift(&diags);
    checks.push(if cfg.scheme.clip_negative {
        CheckOutcome {
            name: "f-mass",
            passed: true,
            detail: format!("relative drift {drift:.3e} (not checked: clip_negative)"),
        }
    } else {
        CheckOutcome {
            name: "f-mass",
            passed: drift <= 1e-12,
            detail: format!("relative drift {drift:.3e} (tolerance 1e-12)"),
        }
    });

    let dt_max = cfl_timestep(&grid, cfg.grid.dx(), &cfg.params, &cfg.scheme);
    let (_, dt) = uniform_steps(cfg.scheme.t_end, dt_max);
    let samples: Vec<(f64, f64)> = diags.iter().map(|d| (d.t, d.g_mass)).collect();
    let m_f0 = first.diagnostics.f_mass;
    let law = g_mass_law_error(&samples, m_f0, &cfg.params, grid.measure());
    let bound = g_mass_error_bound(dt, m_f0, first.diagnostics.g_mass, &cfg.params, grid.measure());
    checks.push(CheckOutcome {
        name: "g-mass",
        passed: law <= bound.max(1e-12 * m_f0.abs()),
        detail: format!("max deviation {law:.3e} (bound {bound:.3e} at dt = {dt:.3e})"),
    });

    let linf = linf_bound_check(&diags, first.diagnostics.f_inf, first.diagnostics.g_inf);
    checks.push(CheckOutcome {
        name: "linf",
        passed: linf.finite,
        detail: format!(
            "sup |f| / |f0| = {:.3}, sup |g| / (|f0| + |g0|) = {:.3}",
            linf.f_ratio, linf.g_ratio
        ),
    });

    let mut profiles = 0usize;
    let mut violations = 0usize;
    for snap in snaps {
        let Some(fields) = &snap.fields else { continue };
        if fields.n_v != grid.len() {
            return Err(Error::GridMismatch(format!(
                "snapshot has {} velocity nodes, config has {}",
                fields.n_v,
                grid.len()
            )));
        }
        for profile in fields.f.chunks_exact(fields.n_v).chain(fields.g.chunks_exact(fields.n_v)) {
            profiles += 1;
            violations += usize::from(!CauchySchwarz::of(profile, &grid)?.holds(4.0));
        }
    }
    if profiles > 0 {
        checks.push(CheckOutcome {
            name: "cauchy-schwarz",
            passed: violations == 0,
            detail: format!("{violations} violations in {profiles} profiles"),
        });
    }
    Ok(checks)
}
