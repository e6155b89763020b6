//! Line-oriented run configuration.
//!
//! ```text
//! # comment
//! mode = kinetic            # kinetic | cattaneo | convergence | verify (required)
//!
//! [params]
//! mu0 = 1.0                 # all rates > 0
//! mu1 = 1.0
//! mu2 = 1.0
//! sigma = 2.0
//! a = 1.0
//! b = 1.0
//! eps = 0.1
//! chi = 1.0                 # >= 0
//!
//! [grid]
//! nu = 1.0
//! n_v = 16                  # even
//! n_x = 200
//! domain_length = 1.0
//!
//! [scheme]
//! cfl_safety = 0.9          # (0, 1]
//! t_end = 1.0               # > 0
//! clip_negative = false
//!
//! [initial]
//! preset = cosine           # uniform | gaussian-pulse | cosine
//! background = 1.0
//! amplitude = 0.5
//! k = 1                     # cosine wave number over the domain
//! center = 0.5              # gaussian-pulse
//! width = 0.05              # gaussian-pulse
//! well_prepared = true
//! perturbation = 0.0        # ill-prepared anisotropy
//! s0 = 0.0                  # uniform isotropic chemoattractant density
//!
//! [convergence]
//! eps_list = 0.4, 0.2, 0.1, 0.05
//!
//! [output]
//! dir = out
//! snapshot_every = 10       # 0: first and last only
//! full_fields = false       # also store f and g per node
//! ```
//!
//! Every key except `mode` is optional. Unknown sections, unknown keys and
//! repeated keys are errors, reported with their line number.

use std::collections::HashSet;
use std::f64::consts::PI;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kinetic::SchemeConfig;
use crate::state::{equilibrium, KineticField, PhysParams, SimState, TaxisFunction};
use crate::velocity_grid::VelocityGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Kinetic,
    Cattaneo,
    Convergence,
    Verify,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "kinetic" => Ok(Mode::Kinetic),
            "cattaneo" => Ok(Mode::Cattaneo),
            "convergence" => Ok(Mode::Convergence),
            "verify" => Ok(Mode::Verify),
            other => Err(format!(
                "unknown mode `{other}` (expected kinetic, cattaneo, convergence or verify)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    pub nu: f64,
    pub n_v: usize,
    pub n_x: usize,
    pub domain_length: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            nu: 1.0,
            n_v: 16,
            n_x: 200,
            domain_length: 1.0,
        }
    }
}

impl GridConfig {
    pub fn dx(&self) -> f64 {
        self.domain_length / self.n_x as f64
    }

    pub fn velocity_grid(&self) -> Result<VelocityGrid> {
        VelocityGrid::build_uniform_symmetric(self.nu, self.n_v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    Uniform,
    GaussianPulse { center: f64, width: f64, amplitude: f64 },
    Cosine { k: f64, amplitude: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialConfig {
    pub preset: Preset,
    pub background: f64,
    pub well_prepared: bool,
    pub perturbation: f64,
    pub s0: f64,
}

impl Default for InitialConfig {
    fn default() -> Self {
        InitialConfig {
            preset: Preset::Cosine {
                k: 1.0,
                amplitude: 0.5,
            },
            background: 1.0,
            well_prepared: true,
            perturbation: 0.0,
            s0: 0.0,
        }
    }
}

impl InitialConfig {
    /// Initial cell density `n0(x)` on a periodic domain of length `length`.
    pub fn density(&self, x: f64, length: f64) -> f64 {
        let bump = match self.preset {
            Preset::Uniform => 0.0,
            Preset::GaussianPulse {
                center,
                width,
                amplitude,
            } => {
                let mut d = (x - center).rem_euclid(length);
                if d > 0.5 * length {
                    d -= length;
                }
                amplitude * (-(d * d) / (2.0 * width * width)).exp()
            }
            Preset::Cosine { k, amplitude } => amplitude * (2.0 * PI * k * x / length).cos(),
        };
        self.background + bump
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub snapshot_every: u64,
    pub full_fields: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: PathBuf::from("out"),
            snapshot_every: 10,
            full_fields: false,
        }
    }
}

pub const DEFAULT_EPS_LIST: [f64; 4] = [0.4, 0.2, 0.1, 0.05];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub params: PhysParams,
    pub grid: GridConfig,
    pub scheme: SchemeConfig,
    pub initial: InitialConfig,
    pub eps_list: Vec<f64>,
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn with_mode(mode: Mode) -> Self {
        RunConfig {
            mode,
            params: PhysParams::default(),
            grid: GridConfig::default(),
            scheme: SchemeConfig {
                snapshot_every: OutputConfig::default().snapshot_every,
                ..SchemeConfig::default()
            },
            initial: InitialConfig::default(),
            eps_list: DEFAULT_EPS_LIST.to_vec(),
            output: OutputConfig::default(),
        }
    }

    /// Builds `f0` and `g0` from the initial-data preset.
    ///
    /// Well-prepared data is `f0 = F_{n0, 0}`. Otherwise
    /// `f0 = n0/|V| (1 + perturbation (gamma^2 v^2 - 1))`, which has the same
    /// density and zero flux but is not an equilibrium. `g0 = s0 / |V|`.
    pub fn initial_state(&self) -> Result<SimState> {
        let grid = Arc::new(self.grid.velocity_grid()?);
        let dx = self.grid.dx();
        let length = self.grid.domain_length;
        let init = self.initial;
        let shape: Vec<f64> = grid
            .nodes()
            .iter()
            .map(|v| grid.gamma_sq() * v * v - 1.0)
            .collect();
        let f = KineticField::from_profiles(self.grid.n_x, dx, Arc::clone(&grid), |_, x| {
            let n0 = init.density(x, length);
            if init.well_prepared {
                equilibrium(n0, 0.0, &grid)
            } else {
                shape
                    .iter()
                    .map(|s| n0 / grid.measure() * (1.0 + init.perturbation * s))
                    .collect()
            }
        })?;
        let g_value = init.s0 / grid.measure();
        let g = KineticField::from_fn(self.grid.n_x, dx, grid, |_, _| g_value)?;
        SimState::new(f, g)
    }
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::with_mode(Mode::Kinetic);
    let mut mode = None;
    let mut section = String::new();
    let mut seen: HashSet<(String, String)> = HashSet::new();
    let mut pulse = (0.5, 0.05);
    let mut amplitude = None;
    let mut k = 1.0;
    let mut preset_name: Option<(String, usize)> = None;
    let mut total_lines = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        total_lines = line_no;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| err(line_no, format!("malformed section header `{line}`")))?
                .trim();
            match name {
                "params" | "grid" | "scheme" | "initial" | "convergence" | "output" => {
                    section = name.to_string()
                }
                other => return Err(err(line_no, format!("unknown section `[{other}]`"))),
            }
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| err(line_no, format!("expected `key = value`, got `{line}`")))?;
        if key.is_empty() {
            return Err(err(line_no, "empty key".into()));
        }
        if !seen.insert((section.clone(), key.to_string())) {
            return Err(err(line_no, format!("duplicate key `{key}`")));
        }
        let v = Value {
            key,
            text: value,
            line: line_no,
        };
        match (section.as_str(), key) {
            ("", "mode") => mode = Some(v.text.parse::<Mode>().map_err(|m| err(line_no, m))?),
            ("params", "mu0") => cfg.params.mu0 = v.positive()?,
            ("params", "mu1") => cfg.params.mu1 = v.positive()?,
            ("params", "mu2") => cfg.params.mu2 = v.positive()?,
            ("params", "sigma") => cfg.params.sigma = v.positive()?,
            ("params", "a") => cfg.params.a = v.positive()?,
            ("params", "b") => cfg.params.b = v.positive()?,
            ("params", "eps") => cfg.params.eps = v.positive()?,
            ("params", "chi") => {
                cfg.params.taxis = TaxisFunction {
                    chi: v.non_negative()?,
                }
            }
            ("grid", "nu") => cfg.grid.nu = v.positive()?,
            ("grid", "n_v") => {
                let n_v: usize = v.parse()?;
                if n_v < 2 || !n_v.is_multiple_of(2) {
                    return Err(v.range("must be even and at least 2"));
                }
                cfg.grid.n_v = n_v;
            }
            ("grid", "n_x") => {
                let n_x: usize = v.parse()?;
                if n_x == 0 {
                    return Err(v.range("must be at least 1"));
                }
                cfg.grid.n_x = n_x;
            }
            ("grid", "domain_length") => cfg.grid.domain_length = v.positive()?,
            ("scheme", "cfl_safety") => {
                let c = v.finite()?;
                if !(c > 0.0 && c <= 1.0) {
                    return Err(v.range("must lie in (0, 1]"));
                }
                cfg.scheme.cfl_safety = c;
            }
            ("scheme", "t_end") => cfg.scheme.t_end = v.positive()?,
            ("scheme", "clip_negative") => cfg.scheme.clip_negative = v.parse()?,
            ("initial", "preset") => preset_name = Some((v.text.to_string(), line_no)),
            ("initial", "background") => cfg.initial.background = v.finite()?,
            ("initial", "amplitude") => amplitude = Some(v.finite()?),
            ("initial", "k") => k = v.finite()?,
            ("initial", "center") => pulse.0 = v.finite()?,
            ("initial", "width") => pulse.1 = v.positive()?,
            ("initial", "well_prepared") => cfg.initial.well_prepared = v.parse()?,
            ("initial", "perturbation") => cfg.initial.perturbation = v.finite()?,
            ("initial", "s0") => cfg.initial.s0 = v.non_negative()?,
            ("convergence", "eps_list") => {
                cfg.eps_list = parse_eps_list(v.text).map_err(|m| err(line_no, m))?
            }
            ("output", "dir") => cfg.output.dir = PathBuf::from(v.text),
            ("output", "snapshot_every") => cfg.output.snapshot_every = v.parse()?,
            ("output", "full_fields") => cfg.output.full_fields = v.parse()?,
            (sec, key) => {
                let place = if sec.is_empty() {
                    "top level".to_string()
                } else {
                    format!("section [{sec}]")
                };
                return Err(err(line_no, format!("unknown key `{key}` in {place}")));
            }
        }
    }

    cfg.mode = mode.ok_or_else(|| err(total_lines, "missing required key `mode`".into()))?;
    let (preset, preset_line) = preset_name.unwrap_or_else(|| ("cosine".into(), 0));
    cfg.initial.preset = match preset.as_str() {
        "uniform" => Preset::Uniform,
        "cosine" => Preset::Cosine {
            k,
            amplitude: amplitude.unwrap_or(0.5),
        },
        "gaussian-pulse" => Preset::GaussianPulse {
            center: pulse.0,
            width: pulse.1,
            amplitude: amplitude.unwrap_or(1.0),
        },
        other => {
            return Err(err(
                preset_line,
                format!("unknown preset `{other}` (expected uniform, gaussian-pulse or cosine)"),
            ))
        }
    };
    cfg.scheme.snapshot_every = cfg.output.snapshot_every;
    Ok(cfg)
}

/// Comma-separated, strictly decreasing positive floats.
pub fn parse_eps_list(text: &str) -> std::result::Result<Vec<f64>, String> {
    let values = text
        .split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .map_err(|_| format!("`{s}` is not a number"))
        })
        .collect::<std::result::Result<Vec<f64>, String>>()?;
    if values.is_empty() {
        return Err("eps list is empty".into());
    }
    if values.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return Err("eps values must be positive".into());
    }
    if values.windows(2).any(|w| w[1] >= w[0]) {
        return Err("eps values must be strictly decreasing".into());
    }
    Ok(values)
}

fn err(line: usize, message: String) -> Error {
    Error::Config { line, message }
}

struct Value<'a> {
    key: &'a str,
    text: &'a str,
    line: usize,
}

impl Value<'_> {
    fn parse<T: FromStr>(&self) -> Result<T> {
        self.text.parse().map_err(|_| {
            err(
                self.line,
                format!("cannot parse `{}` for key `{}`", self.text, self.key),
            )
        })
    }

    fn range(&self, what: &str) -> Error {
        err(
            self.line,
            format!("`{}` {what}, got {}", self.key, self.text),
        )
    }

    fn finite(&self) -> Result<f64> {
        let x: f64 = self.parse()?;
        if !x.is_finite() {
            return Err(self.range("must be finite"));
        }
        Ok(x)
    }

    fn positive(&self) -> Result<f64> {
        let x = self.finite()?;
        if x <= 0.0 {
            return Err(self.range("must be positive"));
        }
        Ok(x)
    }

    fn non_negative(&self) -> Result<f64> {
        let x = self.finite()?;
        if x < 0.0 {
            return Err(self.range("must be non-negative"));
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_of(e: Error) -> (usize, String) {
        match e {
            Error::Config { line, message } => (line, message),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_config_has_defaults() {
        let cfg = parse_config("mode = kinetic\n").unwrap();
        assert_eq!(cfg.mode, Mode::Kinetic);
        assert_eq!(cfg.scheme.cfl_safety, 0.9);
        assert_eq!(cfg.params.taxis.chi, 1.0);
        assert!(!cfg.scheme.clip_negative);
        assert_eq!(cfg.params, PhysParams::default());
        assert_eq!(cfg.grid, GridConfig::default());
        assert_eq!(cfg.eps_list, DEFAULT_EPS_LIST.to_vec());
        assert_eq!(cfg.initial, InitialConfig::default());
    }

    #[test]
    fn full_config() {
        let text = "\
# reference case
mode = convergence

[params]
mu0 = 5
eps = 0.2
chi = 0   # decoupled

[grid]
n_v = 8
n_x = 50
domain_length = 2.0

[scheme]
t_end = 0.5
clip_negative = true

[initial]
preset = gaussian-pulse
center = 0.25
width = 0.1
amplitude = 3
well_prepared = false
perturbation = 0.2

[convergence]
eps_list = 0.2, 0.1

[output]
dir = results/run1
snapshot_every = 5
full_fields = true
";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.mode, Mode::Convergence);
        assert_eq!(cfg.params.mu0, 5.0);
        assert_eq!(cfg.params.eps, 0.2);
        assert_eq!(cfg.params.taxis.chi, 0.0);
        assert_eq!(cfg.grid.n_v, 8);
        assert_eq!(cfg.grid.dx(), 0.04);
        assert!(cfg.scheme.clip_negative);
        assert_eq!(cfg.scheme.snapshot_every, 5);
        assert_eq!(
            cfg.initial.preset,
            Preset::GaussianPulse { center: 0.25, width: 0.1, amplitude: 3.0 }
        );
        assert_eq!(cfg.eps_list, vec![0.2, 0.1]);
        assert_eq!(cfg.output.dir, PathBuf::from("results/run1"));
        assert!(cfg.output.full_fields);
        let state = cfg.initial_state().unwrap();
        assert_eq!(state.n_x(), 50);
    }

    #[test]
    fn negative_eps_names_key_and_line() {
        let (line, msg) = line_of(parse_config("mode = kinetic\n[params]\neps = -1\n").unwrap_err());
        assert_eq!(line, 3);
        assert!(msg.contains("eps"), "{msg}");
    }

    #[test]
    fn duplicate_key_rejected() {
        let (line, msg) =
            line_of(parse_config("mode = kinetic\n[params]\nmu0 = 1\nmu0 = 2\n").unwrap_err());
        assert_eq!(line, 4);
        assert!(msg.contains("duplicate"), "{msg}");
        // same key in different sections is fine only where both exist; here it is unknown
        assert!(parse_config("mode = kinetic\nmode = verify\n").is_err());
    }

    #[test]
    fn unknown_and_missing_keys() {
        let (line, msg) = line_of(parse_config("mode = kinetic\n[grid]\nnx = 3\n").unwrap_err());
        assert_eq!(line, 3);
        assert!(msg.contains("unknown key"), "{msg}");
        let (_, msg) = line_of(parse_config("[params]\neps = 0.1\n").unwrap_err());
        assert!(msg.contains("missing required key `mode`"), "{msg}");
        let (line, _) = line_of(parse_config("mode = kinetic\n[bogus]\n").unwrap_err());
        assert_eq!(line, 2);
        assert!(parse_config("mode = sideways\n").is_err());
        assert!(parse_config("mode = kinetic\njunk\n").is_err());
    }

    #[test]
    fn range_checks() {
        for bad in [
            "[grid]\nn_v = 7",
            "[grid]\nn_x = 0",
            "[scheme]\ncfl_safety = 1.5",
            "[scheme]\nt_end = 0",
            "[params]\nchi = -0.5",
            "[params]\nsigma = nan",
            "[initial]\npreset = triangle",
            "[convergence]\neps_list = 0.1, 0.2",
            "[scheme]\nclip_negative = maybe",
        ] {
            let text = format!("mode = kinetic\n{bad}\n");
            assert!(parse_config(&text).is_err(), "accepted: {bad}");
        }
    }

    #[test]
    fn ill_prepared_initial_data_keeps_density() {
        let cfg = parse_config(
            "mode = kinetic\n[grid]\nn_x = 10\n[initial]\nwell_prepared = false\nperturbation = 0.3\n",
        )
        .unwrap();
        let s = cfg.initial_state().unwrap();
        let (n, j) = s.f.density_and_flux();
        for (i, (n, j)) in n.iter().zip(&j).enumerate() {
            let x = s.f.cell_center(i);
            assert!((n - cfg.initial.density(x, 1.0)).abs() < 1e-14);
            assert!(j.abs() < 1e-15);
        }
        assert!(crate::verification::equilibrium_distance(&s.f) > 1e-3);
    }

    #[test]
    fn gaussian_is_periodic() {
        let init = InitialConfig {
            preset: Preset::GaussianPulse { center: 0.05, width: 0.1, amplitude: 1.0 },
            background: 0.0,
            ..Default::default()
        };
        let a = init.density(0.95, 1.0);
        let b = init.density(0.15, 1.0);
        assert!((a - b).abs() < 1e-12);
    }
}
