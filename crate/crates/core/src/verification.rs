//! Executable checks: mass laws, L-infinity and L2 bounds, distance to local
//! equilibrium, and the kinetic-to-Cattaneo convergence study.
//!
//! Everything here is a pure function of states or recorded samples. The
//! study compares strong discrete norms of the moments `(n, J, S)`; the
//! limit theorem itself is a weak-L2 statement with no rate, so the observed
//! orders are scheme-level measurements, not proven values.

use std::sync::Arc;

use crate::cattaneo::{run_cattaneo, CattaneoState};
use crate::error::{Error, Result};
use crate::kinetic::{run, SchemeConfig};
use crate::state::{equilibrium_into, sym_antisym_split, KineticField, PhysParams, SimState};
use crate::velocity_grid::{NeumaierSum, VelocityGrid};

/// `sum_ij w_j values_ij dx`
pub fn field_mass(field: &KineticField) -> f64 {
    let grid = field.grid();
    let mut acc = NeumaierSum::default();
    for row in field.rows() {
        acc.add(grid.moment_unchecked(row, 0));
    }
    acc.total() * field.dx()
}

pub fn f_mass(state: &SimState) -> f64 {
    field_mass(&state.f)
}

pub fn g_mass(state: &SimState) -> f64 {
    field_mass(&state.g)
}

/// `(a/b) M_f0 (1 - e^{-b|V|t}) + M_g0 e^{-b|V|t}`
pub fn g_mass_closed_form(t: f64, m_f0: f64, m_g0: f64, params: &PhysParams, measure: f64) -> f64 {
    let decay = (-params.b * measure * t).exp();
    params.a / params.b * m_f0 * (1.0 - decay) + m_g0 * decay
}

/// Largest `|M_g(t) - closed form|` over `(t, M_g)` samples. The first sample
/// supplies `M_g(0)` and must sit at `t = 0`.
pub fn g_mass_law_error(samples: &[(f64, f64)], m_f0: f64, params: &PhysParams, measure: f64) -> f64 {
    let Some(&(t0, m_g0)) = samples.first() else {
        return 0.0;
    };
    samples
        .iter()
        .map(|&(t, m)| (m - g_mass_closed_form(t - t0, m_f0, m_g0, params, measure)).abs())
        .fold(0.0, f64::max)
}

/// Error bound `C dt` for the discrete g-mass law under a uniform step `dt`,
/// with `C = b|V| |M_g0 - (a/b) M_f0|`. The update of the total g-mass is the
/// explicit Euler step of the mass ODE, whose global error is bounded by
/// `dt b|V| |M_g0 - M_g_inf| / (2e)` to leading order.
pub fn g_mass_error_bound(dt: f64, m_f0: f64, m_g0: f64, params: &PhysParams, measure: f64) -> f64 {
    let rate = params.b * measure;
    rate * (m_g0 - params.a / params.b * m_f0).abs() * dt
}

/// `sum_ij w_j dx (f^2 + g^2)`
pub fn l2_energy(state: &SimState) -> f64 {
    squared_norm(&state.f) + squared_norm(&state.g)
}

fn squared_norm(field: &KineticField) -> f64 {
    let grid = field.grid();
    let mut acc = NeumaierSum::default();
    let mut sq = vec![0.0; grid.len()];
    for row in field.rows() {
        for (s, x) in sq.iter_mut().zip(row) {
            *s = x * x;
        }
        acc.add(grid.moment_unchecked(&sq, 0));
    }
    acc.total() * field.dx()
}

/// Discrete `L2_{x,v}` norm of `f - F_{n(f), J(f)}`.
pub fn equilibrium_distance(f: &KineticField) -> f64 {
    let grid = Arc::clone(f.grid());
    let mut target = vec![0.0; grid.len()];
    let mut dev = vec![0.0; grid.len()];
    let mut acc = NeumaierSum::default();
    for row in f.rows() {
        let (n, j) = grid.density_and_flux(row);
        equilibrium_into(n, j, &grid, &mut target);
        for ((d, x), t) in dev.iter_mut().zip(row).zip(&target) {
            *d = (x - t) * (x - t);
        }
        acc.add(grid.moment_unchecked(&dev, 0));
    }
    (acc.total() * f.dx()).sqrt()
}

/// Scalar diagnostics of one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub t: f64,
    pub step: u64,
    pub f_mass: f64,
    pub g_mass: f64,
    pub f_inf: f64,
    pub g_inf: f64,
    pub min_f: f64,
    pub min_g: f64,
    pub l2_energy: f64,
    pub equilibrium_distance: f64,
}

impl Diagnostics {
    pub fn of(state: &SimState) -> Self {
        Diagnostics {
            t: state.t,
            step: state.step_count,
            f_mass: f_mass(state),
            g_mass: g_mass(state),
            f_inf: state.f.max_abs(),
            g_inf: state.g.max_abs(),
            min_f: state.f.min_value(),
            min_g: state.g.min_value(),
            l2_energy: l2_energy(state),
            equilibrium_distance: equilibrium_distance(&state.f),
        }
    }
}

/// Largest relative drift of the f-mass from the first sample.
pub fn f_mass_drift(trajectory: &[Diagnostics]) -> f64 {
    let Some(first) = trajectory.first() else {
        return 0.0;
    };
    let m0 = first.f_mass;
    let scale = if m0 != 0.0 { m0.abs() } else { 1.0 };
    trajectory
        .iter()
        .map(|d| (d.f_mass - m0).abs() / scale)
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinfReport {
    /// `sup_t ||f||_inf / ||f0||_inf`
    pub f_ratio: f64,
    /// `sup_t ||g||_inf / (||f0||_inf + ||g0||_inf)`
    pub g_ratio: f64,
    pub finite: bool,
}

/// Qualitative boundedness in the sense of the a priori L-infinity estimates.
/// Ratios are 0 when the reference norm is 0 and the trajectory stays 0.
pub fn linf_bound_check(trajectory: &[Diagnostics], f0_inf: f64, g0_inf: f64) -> LinfReport {
    let ratio = |num: f64, den: f64| {
        if den > 0.0 {
            num / den
        } else if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    };
    let f_sup = trajectory.iter().map(|d| d.f_inf).fold(0.0, f64::max);
    let g_sup = trajectory.iter().map(|d| d.g_inf).fold(0.0, f64::max);
    let f_ratio = ratio(f_sup, f0_inf);
    let g_ratio = ratio(g_sup, f0_inf + g0_inf);
    LinfReport {
        f_ratio,
        g_ratio,
        finite: f_ratio.is_finite() && g_ratio.is_finite(),
    }
}

/// `max_{t > 0} ln(E(t) / E(0)) / t` over the samples.
pub fn energy_growth_exponent(trajectory: &[Diagnostics]) -> f64 {
    let Some(first) = trajectory.first() else {
        return 0.0;
    };
    let (t0, e0) = (first.t, first.l2_energy);
    trajectory
        .iter()
        .filter(|d| d.t > t0)
        .map(|d| (d.l2_energy / e0).ln() / (d.t - t0))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Both Cauchy-Schwarz bounds used in the L2 estimate, plus the orthogonal split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CauchySchwarz {
    /// `(sum w h)^2` and `|V| sum w h^2`
    pub density: (f64, f64),
    /// `(sum w v h)^2` and `|V| / gamma^2 sum w h^2`
    pub flux: (f64, f64),
    /// `sum w h^2` and `sum w (h^S)^2 + sum w (h^A)^2`
    pub split: (f64, f64),
}

impl CauchySchwarz {
    pub fn of(profile: &[f64], grid: &VelocityGrid) -> Result<Self> {
        let sq: Vec<f64> = profile.iter().map(|h| h * h).collect();
        let energy = grid.moment(&sq, 0)?;
        let n = grid.moment(profile, 0)?;
        let j = grid.moment(profile, 1)?;
        let (even, odd) = sym_antisym_split(profile, grid)?;
        let even_sq: Vec<f64> = even.iter().map(|h| h * h).collect();
        let odd_sq: Vec<f64> = odd.iter().map(|h| h * h).collect();
        Ok(CauchySchwarz {
            density: (n * n, grid.measure() * energy),
            flux: (j * j, grid.measure() / grid.gamma_sq() * energy),
            split: (energy, grid.moment(&even_sq, 0)? + grid.moment(&odd_sq, 0)?),
        })
    }

    /// Both inequalities hold up to `ulps` relative rounding and the split to the same.
    pub fn holds(&self, ulps: f64) -> bool {
        let tol = ulps * f64::EPSILON;
        self.density.0 <= self.density.1 * (1.0 + tol)
            && self.flux.0 <= self.flux.1 * (1.0 + tol)
            && (self.split.0 - self.split.1).abs() <= tol * self.split.0
    }
}

/// Checks every profile of a field; returns the first failing `(cell, report)`.
pub fn check_cauchy_schwarz(field: &KineticField, ulps: f64) -> Result<Option<(usize, CauchySchwarz)>> {
    for (i, row) in field.rows().enumerate() {
        let cs = CauchySchwarz::of(row, field.grid())?;
        if !cs.holds(ulps) {
            return Ok(Some((i, cs)));
        }
    }
    Ok(None)
}

/// Per-cell `(n, J, S)` at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSample {
    pub t: f64,
    pub n: Vec<f64>,
    pub j: Vec<f64>,
    pub s: Vec<f64>,
    pub dx: f64,
}

impl MomentSample {
    pub fn from_kinetic(state: &SimState) -> Result<Self> {
        let (n, j) = state.f.density_and_flux();
        Ok(MomentSample {
            t: state.t,
            n,
            j,
            s: state.g.cell_moments(0)?,
            dx: state.dx(),
        })
    }

    pub fn from_cattaneo(state: &CattaneoState) -> Result<Self> {
        Ok(MomentSample {
            t: state.t,
            n: state.n.clone(),
            j: state.j.clone(),
            s: state.g.cell_moments(0)?,
            dx: state.dx(),
        })
    }
}

/// `L2((0,T) x domain)` distance of two moment trajectories sampled at the
/// same times. Time quadrature is the right-endpoint rule over the samples
/// after the first. Returns the total and the `(n, J, S)` components.
pub fn trajectory_l2_error(a: &[MomentSample], b: &[MomentSample]) -> Result<[f64; 4]> {
    if a.len() != b.len() {
        return Err(Error::GridMismatch(format!(
            "trajectories have {} and {} samples",
            a.len(),
            b.len()
        )));
    }
    let mut parts = [NeumaierSum::default(); 3];
    for k in 1..a.len() {
        let (x, y) = (&a[k], &b[k]);
        if x.n.len() != y.n.len() || x.dx != y.dx {
            return Err(Error::GridMismatch(format!(
                "sample {k}: {} cells of width {} vs {} cells of width {}",
                x.n.len(),
                x.dx,
                y.n.len(),
                y.dx
            )));
        }
        let dt_prev = a[k - 1].t;
        if (x.t - y.t).abs() > 1e-12 * x.t.abs().max(1.0) {
            return Err(Error::GridMismatch(format!(
                "sample {k} at t = {} vs t = {}",
                x.t, y.t
            )));
        }
        let w = (x.t - dt_prev) * x.dx;
        let sq = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(p, q)| (p - q) * (p - q)).sum::<f64>();
        parts[0].add(w * sq(&x.n, &y.n));
        parts[1].add(w * sq(&x.j, &y.j));
        parts[2].add(w * sq(&x.s, &y.s));
    }
    let [n, j, s] = parts.map(|p| p.total());
    Ok([(n + j + s).sqrt(), n.sqrt(), j.sqrt(), s.sqrt()])
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceMeta {
    pub n_x: usize,
    pub n_v: usize,
    pub t_end: f64,
    pub dt: f64,
    pub params: PhysParams,
}

/// Result of an eps sweep against one Cattaneo reference run.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub eps_values: Vec<f64>,
    /// `L2((0,T) x domain)` error of `(n, J, S)` per eps.
    pub errors: Vec<f64>,
    pub errors_n: Vec<f64>,
    pub errors_j: Vec<f64>,
    pub errors_s: Vec<f64>,
    /// `ln(e_k / e_{k+1}) / ln(eps_k / eps_{k+1})`; one fewer than `eps_values`.
    pub observed_orders: Vec<f64>,
    /// Equilibrium distance of `f` at `t_end`.
    pub equilibrium_distance: Vec<f64>,
    /// Whether `t_end >= 10 eps / mu0`, i.e. the initial layer has decayed.
    pub layer_excluded: Vec<bool>,
    pub energy_exponent: Vec<f64>,
    pub linf: Vec<LinfReport>,
    pub meta: ConvergenceMeta,
}

impl ConvergenceReport {
    /// `e_k / e_{k+1}` for successive entries.
    pub fn error_ratios(&self) -> Vec<f64> {
        self.errors.windows(2).map(|w| w[0] / w[1]).collect()
    }
}

/// Observed order between successive `(eps, error)` pairs.
pub fn observed_orders(eps: &[f64], errors: &[f64]) -> Vec<f64> {
    eps.windows(2)
        .zip(errors.windows(2))
        .map(|(e, r)| (r[0] / r[1]).ln() / (e[0] / e[1]).ln())
        .collect()
}

/// Runs the kinetic solver for each eps and the Cattaneo system once from the
/// moments of `initial`, on the same grid and step, and compares moments at
/// every step. `params.eps` is ignored.
pub fn eps_convergence_study(
    initial: &SimState,
    params: &PhysParams,
    cfg: &SchemeConfig,
    eps_list: &[f64],
) -> Result<ConvergenceReport> {
    if eps_list.is_empty() {
        return Err(Error::param("eps_list", "must not be empty"));
    }
    if eps_list.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return Err(Error::param("eps_list", "entries must be positive"));
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::param("eps_list", "must be strictly decreasing"));
    }
    let cfg = SchemeConfig {
        snapshot_every: 1,
        ..*cfg
    };

    let limit0 = CattaneoState::from_kinetic(initial);
    let mut reference = Vec::new();
    let mut dt = 0.0;
    run_cattaneo(&limit0, params, &cfg, &mut |s| {
        if let Some(prev) = reference.last() {
            let prev: &MomentSample = prev;
            dt = s.t - prev.t;
        }
        reference.push(MomentSample::from_cattaneo(s)?);
        Ok(())
    })?;

    let mut report = ConvergenceReport {
        eps_values: eps_list.to_vec(),
        errors: Vec::new(),
        errors_n: Vec::new(),
        errors_j: Vec::new(),
        errors_s: Vec::new(),
        observed_orders: Vec::new(),
        equilibrium_distance: Vec::new(),
        layer_excluded: Vec::new(),
        energy_exponent: Vec::new(),
        linf: Vec::new(),
        meta: ConvergenceMeta {
            n_x: initial.n_x(),
            n_v: initial.grid().len(),
            t_end: cfg.t_end,
            dt,
            params: *params,
        },
    };
    let f0_inf = initial.f.max_abs();
    let g0_inf = initial.g.max_abs();

    for &eps in eps_list {
        let p = params.with_eps(eps);
        let mut samples = Vec::with_capacity(reference.len());
        let mut diags = Vec::with_capacity(reference.len());
        let last = run(initial, &p, &cfg, &mut |s: &SimState| {
            samples.push(MomentSample::from_kinetic(s)?);
            diags.push(Diagnostics::of(s));
            Ok(())
        })?;
        let [e, en, ej, es] = trajectory_l2_error(&samples, &reference)?;
        report.errors.push(e);
        report.errors_n.push(en);
        report.errors_j.push(ej);
        report.errors_s.push(es);
        report.equilibrium_distance.push(equilibrium_distance(&last.f));
        report.layer_excluded.push(cfg.t_end >= 10.0 * eps / p.mu0);
        report.energy_exponent.push(energy_growth_exponent(&diags));
        report.linf.push(linf_bound_check(&diags, f0_inf, g0_inf));
    }
    report.observed_orders = observed_orders(&report.eps_values, &report.errors);
    Ok(report)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let m = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / m;
    let my = ly.iter().sum::<f64>() / m;
    let cov: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    cov / var
}

/// Largest over smallest of a set of positive values.
pub fn spread(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    max / min
}
