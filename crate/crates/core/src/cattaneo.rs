//! The `eps -> 0` limit system: a damped hyperbolic (Cattaneo) pair for the
//! cell density and flux, coupled to the unchanged kinetic equation for `g`.
//!
//! ```text
//! d_t n + d_x J              = 0
//! d_t J + gamma^-2 d_x n     = -mu1 J + mu2 n alpha(S)
//! d_t g + v d_x g            = sigma (S/|V| - g) + a n - b S
//! ```
//!
//! There is no closure for the chemoattractant: `g` keeps its velocity variable.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kinetic::{cfl_timestep, chemo_source_step, transport_step, uniform_steps, SchemeConfig};
use crate::state::{alpha_eval, equilibrium, KineticField, PhysParams, SimState};

#[derive(Debug, Clone, PartialEq)]
pub struct CattaneoState {
    pub n: Vec<f64>,
    pub j: Vec<f64>,
    pub g: KineticField,
    pub t: f64,
    pub step_count: u64,
}

impl CattaneoState {
    pub fn new(n: Vec<f64>, j: Vec<f64>, g: KineticField) -> Result<Self> {
        if n.len() != g.n_x() || j.len() != g.n_x() {
            return Err(Error::LengthMismatch {
                expected: g.n_x(),
                got: if n.len() != g.n_x() { n.len() } else { j.len() },
            });
        }
        Ok(CattaneoState {
            n,
            j,
            g,
            t: 0.0,
            step_count: 0,
        })
    }

    /// Limit initial data from a kinetic state: the moments of `f` and a copy of `g`.
    pub fn from_kinetic(state: &SimState) -> Self {
        let (n, j) = state.f.density_and_flux();
        CattaneoState {
            n,
            j,
            g: state.g.clone(),
            t: state.t,
            step_count: state.step_count,
        }
    }

    /// `f = F_{n,J}` on every cell.
    pub fn reconstruct_f(&self) -> KineticField {
        let grid = Arc::clone(self.g.grid());
        KineticField::from_profiles(self.g.n_x(), self.g.dx(), Arc::clone(&grid), |i, _| {
            equilibrium(self.n[i], self.j[i], &grid)
        })
        .expect("layout taken from an existing field")
    }

    pub fn dx(&self) -> f64 {
        self.g.dx()
    }
}

/// Upwind step for the wave part, done on the Riemann invariants
/// `w+- = n +- gamma J`, which travel at `+-1/gamma`.
pub fn macro_flux_step(
    n: &[f64],
    j: &[f64],
    gamma_sq: f64,
    dt: f64,
    dx: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if n.len() != j.len() {
        return Err(Error::LengthMismatch {
            expected: n.len(),
            got: j.len(),
        });
    }
    let gamma = gamma_sq.sqrt();
    if !(dt >= 0.0) || dt > dx * gamma * (1.0 + 4.0 * f64::EPSILON) {
        return Err(Error::Cfl {
            dt,
            limit: dx * gamma,
        });
    }
    let len = n.len();
    let c = dt / (gamma * dx);
    let plus: Vec<f64> = n.iter().zip(j).map(|(n, j)| n + gamma * j).collect();
    let minus: Vec<f64> = n.iter().zip(j).map(|(n, j)| n - gamma * j).collect();
    let mut n_new = vec![0.0; len];
    let mut j_new = vec![0.0; len];
    for i in 0..len {
        let left = (i + len - 1) % len;
        let right = (i + 1) % len;
        let wp = plus[i] - c * (plus[i] - plus[left]);
        let wm = minus[i] - c * (minus[i] - minus[right]);
        n_new[i] = 0.5 * (wp + wm);
        j_new[i] = 0.5 * (wp - wm) / gamma;
    }
    Ok((n_new, j_new))
}

/// Exact solution of `dJ/dt = -mu1 J + mu2 n alpha(S)` with `n` and `S` frozen.
/// Accepts `mu1 = 0`, where the update is `J + dt mu2 n alpha(S)`.
pub fn macro_source_step(
    n: &[f64],
    j: &[f64],
    s: &[f64],
    params: &PhysParams,
    dt: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if n.len() != j.len() || n.len() != s.len() {
        return Err(Error::LengthMismatch {
            expected: n.len(),
            got: if j.len() != n.len() { j.len() } else { s.len() },
        });
    }
    let decay = (-params.mu1 * dt).exp();
    // (1 - exp(-mu1 dt)) / mu1 without cancellation; dt in the mu1 -> 0 limit
    let growth = if params.mu1 > 0.0 {
        -(-params.mu1 * dt).exp_m1() / params.mu1
    } else {
        dt
    };
    let j_new = n
        .iter()
        .zip(j)
        .zip(s)
        .map(|((&n, &j), &s)| {
            Ok(j * decay + params.mu2 * n * alpha_eval(s, &params.taxis)? * growth)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok((n.to_vec(), j_new))
}

/// Step bound shared with the kinetic solver: the kinetic CFL and the wave
/// CFL `dx gamma`, scaled by the safety factor.
pub fn cattaneo_timestep(state: &CattaneoState, params: &PhysParams, cfg: &SchemeConfig) -> f64 {
    let grid = state.g.grid();
    let kinetic = cfl_timestep(grid, state.dx(), params, cfg);
    let wave = cfg.cfl_safety * state.dx() * grid.gamma_sq().sqrt();
    kinetic.min(wave)
}

pub fn step_cattaneo_with_dt(
    state: &CattaneoState,
    params: &PhysParams,
    dt: f64,
) -> Result<CattaneoState> {
    let gamma_sq = state.g.grid().gamma_sq();
    let (n, j) = macro_flux_step(&state.n, &state.j, gamma_sq, dt, state.dx())?;
    let g = transport_step(&state.g, dt)?;
    let s = g.cell_moments(0)?;
    let (n, j) = macro_source_step(&n, &j, &s, params, dt)?;
    let g = chemo_source_step(&g, &n, params, dt)?;

    if let Some(i) = n.iter().chain(&j).position(|x| !x.is_finite()) {
        let len = n.len();
        let value = if i < len { n[i] } else { j[i - len] };
        return Err(Error::NonFinite {
            cell: i % len,
            node: 0,
            substep: if i < len { "macro density" } else { "macro flux" },
            value,
        });
    }
    if let Some((cell, node, value)) = g.first_non_finite() {
        return Err(Error::NonFinite {
            cell,
            node,
            substep: "chemoattractant",
            value,
        });
    }
    Ok(CattaneoState {
        n,
        j,
        g,
        t: state.t + dt,
        step_count: state.step_count + 1,
    })
}

/// Integrates the limit system over `cfg.t_end`; same step selection and
/// snapshot cadence as [`crate::kinetic::run`].
pub fn run_cattaneo(
    initial: &CattaneoState,
    params: &PhysParams,
    cfg: &SchemeConfig,
    sink: &mut dyn FnMut(&CattaneoState) -> Result<()>,
) -> Result<CattaneoState> {
    params.validate()?;
    cfg.validate()?;
    let dt_max = cattaneo_timestep(initial, params, cfg);
    let (count, dt) = uniform_steps(cfg.t_end, dt_max);
    let t0 = initial.t;
    sink(initial)?;
    let mut state = initial.clone();
    for k in 1..=count {
        state = step_cattaneo_with_dt(&state, params, dt)?;
        state.t = if k == count {
            t0 + cfg.t_end
        } else {
            t0 + k as f64 * dt
        };
        let due = cfg.snapshot_every > 0 && k % cfg.snapshot_every == 0;
        if due || k == count {
            sink(&state)?;
        }
    }
    Ok(state)
}
