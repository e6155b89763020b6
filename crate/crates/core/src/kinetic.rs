//! Time integration of the scaled kinetic system on a periodic 1D grid.
//!
//! One step is a first-order Lie splitting:
//!
//! 1. upwind transport of `f` and `g`,
//! 2. explicit Euler for the taxis/turning source of `f` with frozen `(n, J, S)`,
//! 3. explicit Euler for the chemoattractant source of `g` with frozen `(S, n)`,
//! 4. exact exponential relaxation of `f` toward `F_{n,J}`.
//!
//! The stiff `mu0 / eps` relaxation is solved exactly and runs last, so as
//! `eps -> 0` every step ends on the local equilibrium manifold and the
//! scheme stays stable at the transport time step.

use crate::error::{Error, Result};
use crate::state::{alpha_eval, equilibrium_into, KineticField, PhysParams, SimState};
use crate::velocity_grid::VelocityGrid;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    /// Fraction of the stable time step actually taken, in `(0, 1]`.
    pub cfl_safety: f64,
    pub t_end: f64,
    /// Emit a snapshot every this many steps (0 disables intermediate snapshots).
    pub snapshot_every: u64,
    /// Clamp negative values to zero after each step. Breaks mass conservation.
    pub clip_negative: bool,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        SchemeConfig {
            cfl_safety: 0.9,
            t_end: 1.0,
            snapshot_every: 0,
            clip_negative: false,
        }
    }
}

impl SchemeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return Err(Error::param(
                "cfl_safety",
                format!("must lie in (0, 1], got {}", self.cfl_safety),
            ));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::param(
                "t_end",
                format!("must be finite and non-negative, got {}", self.t_end),
            ));
        }
        Ok(())
    }
}

/// Rate bound for the explicit source substeps: `mu1 + mu2 gamma^2 nu alpha_inf + sigma + b |V|`.
pub fn source_rate_bound(grid: &VelocityGrid, params: &PhysParams) -> f64 {
    params.mu1
        + params.mu2 * grid.gamma_sq() * grid.nu() * params.taxis.alpha_inf()
        + params.sigma
        + params.b * grid.measure()
}

/// Stable step: transport CFL `dx / nu` and the explicit source bound.
/// The stiff relaxation is integrated exactly and does not restrict the step.
pub fn cfl_timestep(grid: &VelocityGrid, dx: f64, params: &PhysParams, cfg: &SchemeConfig) -> f64 {
    let transport = dx / grid.nu();
    let source = 1.0 / source_rate_bound(grid, params);
    cfg.cfl_safety * transport.min(source)
}

/// First-order upwind transport of every velocity node on periodic cells.
///
/// The stability check uses the largest stored speed, which is slightly
/// below `nu` for midpoint nodes.
pub fn transport_step(field: &KineticField, dt: f64) -> Result<KineticField> {
    let grid = field.grid();
    let dx = field.dx();
    let v_max = grid.max_speed();
    if !(dt >= 0.0) || dt * v_max > dx * (1.0 + 4.0 * f64::EPSILON) {
        return Err(Error::Cfl {
            dt,
            limit: dx / v_max,
        });
    }
    let n_x = field.n_x();
    let n_v = field.n_v();
    let old = field.values();
    let mut out = field.clone();
    let new = out.values_mut();
    for (j, &v) in grid.nodes().iter().enumerate() {
        let c = v.abs() * dt / dx;
        // upwind neighbour offset on the periodic ring
        let shift = if v > 0.0 { n_x - 1 } else { 1 };
        for i in 0..n_x {
            let up = (i + shift) % n_x;
            let here = old[i * n_v + j];
            new[i * n_v + j] = here - c * (here - old[up * n_v + j]);
        }
    }
    Ok(out)
}

/// Exact solution of `df/dt = (mu0 / eps) (F_{n,J} - f)` over `dt`.
///
/// `n` and `J` are invariants of this flow, so the target is frozen and the
/// update is `F + exp(-mu0 dt / eps) (f - F)` per node.
pub fn relaxation_step_exact(f: &KineticField, params: &PhysParams, dt: f64) -> KineticField {
    let decay = (-params.mu0 * dt / params.eps).exp();
    let grid = std::sync::Arc::clone(f.grid());
    let mut out = f.clone();
    let mut target = vec![0.0; grid.len()];
    for i in 0..f.n_x() {
        let (n, j) = grid.density_and_flux(f.row(i));
        equilibrium_into(n, j, &grid, &mut target);
        for (o, &t) in out.row_mut(i).iter_mut().zip(&target) {
            *o = t + decay * (*o - t);
        }
    }
    out
}

/// Explicit Euler for `mu1 (n/|V| - f) - mu2 gamma^2 (J/|V| - v f) alpha(S)`
/// with `n, J` taken from `f` and `S` given per cell.
pub fn taxis_source_step(
    f: &KineticField,
    s: &[f64],
    params: &PhysParams,
    dt: f64,
) -> Result<KineticField> {
    if s.len() != f.n_x() {
        return Err(Error::LengthMismatch {
            expected: f.n_x(),
            got: s.len(),
        });
    }
    let grid = std::sync::Arc::clone(f.grid());
    let inv_measure = 1.0 / grid.measure();
    let drift = params.mu2 * grid.gamma_sq();
    let mut out = f.clone();
    for (i, &s_i) in s.iter().enumerate() {
        let alpha = alpha_eval(s_i, &params.taxis)?;
        let (n, j) = grid.density_and_flux(f.row(i));
        let iso = n * inv_measure;
        let flux = j * inv_measure;
        for (o, &v) in out.row_mut(i).iter_mut().zip(grid.nodes()) {
            let f_ij = *o;
            let rhs = params.mu1 * (iso - f_ij) - drift * (flux - v * f_ij) * alpha;
            *o = f_ij + dt * rhs;
        }
    }
    Ok(out)
}

/// Explicit Euler for `sigma (S/|V| - g) + a n - b S` with `S` taken from `g`.
pub fn chemo_source_step(
    g: &KineticField,
    n: &[f64],
    params: &PhysParams,
    dt: f64,
) -> Result<KineticField> {
    if n.len() != g.n_x() {
        return Err(Error::LengthMismatch {
            expected: g.n_x(),
            got: n.len(),
        });
    }
    let grid = std::sync::Arc::clone(g.grid());
    let inv_measure = 1.0 / grid.measure();
    let mut out = g.clone();
    for (i, &n_i) in n.iter().enumerate() {
        let s = grid.moment_unchecked(g.row(i), 0);
        let production = params.a * n_i - params.b * s;
        let iso = s * inv_measure;
        for o in out.row_mut(i) {
            *o += dt * (params.sigma * (iso - *o) + production);
        }
    }
    Ok(out)
}

fn check_finite(field: &KineticField, substep: &'static str) -> Result<()> {
    match field.first_non_finite() {
        Some((cell, node, value)) => Err(Error::NonFinite {
            cell,
            node,
            substep,
            value,
        }),
        None => Ok(()),
    }
}

/// Advances one step with an explicit `dt`.
pub fn step_with_dt(
    state: &SimState,
    params: &PhysParams,
    cfg: &SchemeConfig,
    dt: f64,
) -> Result<SimState> {
    let f = transport_step(&state.f, dt)?;
    check_finite(&f, "transport(f)")?;
    let g = transport_step(&state.g, dt)?;
    check_finite(&g, "transport(g)")?;

    let s = g.cell_moments(0)?;
    let f = taxis_source_step(&f, &s, params, dt)?;
    check_finite(&f, "taxis source")?;

    let n = f.cell_moments(0)?;
    let mut g = chemo_source_step(&g, &n, params, dt)?;
    check_finite(&g, "chemo source")?;

    let mut f = relaxation_step_exact(&f, params, dt);
    check_finite(&f, "relaxation")?;

    if cfg.clip_negative {
        for x in f.values_mut().iter_mut().chain(g.values_mut().iter_mut()) {
            *x = x.max(0.0);
        }
    }

    Ok(SimState {
        f,
        g,
        t: state.t + dt,
        step_count: state.step_count + 1,
    })
}

/// Advances one step of size [`cfl_timestep`].
pub fn step(state: &SimState, params: &PhysParams, cfg: &SchemeConfig) -> Result<SimState> {
    let dt = cfl_timestep(state.grid(), state.dx(), params, cfg);
    step_with_dt(state, params, cfg, dt)
}

/// Consumer of intermediate states emitted by [`run`].
pub trait SnapshotSink {
    fn record(&mut self, state: &SimState) -> Result<()>;
}

impl<F: FnMut(&SimState) -> Result<()>> SnapshotSink for F {
    fn record(&mut self, state: &SimState) -> Result<()> {
        self(state)
    }
}

/// Discards every snapshot.
#[derive(Debug, Default, Clone, Copy)]
pub struct NullSink;

impl SnapshotSink for NullSink {
    fn record(&mut self, _state: &SimState) -> Result<()> {
        Ok(())
    }
}

/// Uniform step used by [`run`]: the largest `t_end / k` not exceeding the CFL step.
pub fn uniform_steps(t_end: f64, dt_max: f64) -> (u64, f64) {
    if t_end <= 0.0 {
        return (0, 0.0);
    }
    let count = (t_end / dt_max).ceil().max(1.0) as u64;
    (count, t_end / count as f64)
}

/// Integrates from `initial.t` to `initial.t + cfg.t_end`.
///
/// Snapshots go to `sink` at step 0, every `snapshot_every` steps and at the
/// final step. The step size is uniform and independent of the solution, so
/// runs with identical inputs are bitwise reproducible.
pub fn run(
    initial: &SimState,
    params: &PhysParams,
    cfg: &SchemeConfig,
    sink: &mut dyn SnapshotSink,
) -> Result<SimState> {
    params.validate()?;
    cfg.validate()?;
    if !initial.f.same_layout(&initial.g) {
        return Err(Error::GridMismatch(
            "f and g must share cells and velocity grid".into(),
        ));
    }
    let dt_max = cfl_timestep(initial.grid(), initial.dx(), params, cfg);
    let (count, dt) = uniform_steps(cfg.t_end, dt_max);
    let t0 = initial.t;

    sink.record(initial)?;
    let mut state = initial.clone();
    for k in 1..=count {
        state = step_with_dt(&state, params, cfg, dt)?;
        state.t = if k == count {
            t0 + cfg.t_end
        } else {
            t0 + k as f64 * dt
        };
        let due = cfg.snapshot_every > 0 && k % cfg.snapshot_every == 0;
        if due || k == count {
            let (min_f, min_g) = (state.f.min_value(), state.g.min_value());
            if min_f < 0.0 || min_g < 0.0 {
                log::warn!(
                    "negative values at t = {}: min f = {min_f:e}, min g = {min_g:e}",
                    state.t
                );
            }
            sink.record(&state)?;
        }
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{compute_moments, equilibrium};
    use std::sync::Arc;

    fn grid(n_v: usize) -> Arc<VelocityGrid> {
        Arc::new(VelocityGrid::build_uniform_symmetric(1.0, n_v).unwrap())
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    fn mass(field: &KineticField) -> f64 {
        field.cell_moments(0).unwrap().iter().sum::<f64>() * field.dx()
    }

    #[test]
    fn cfl_transport_limited() {
        let g = grid(16);
        let params = PhysParams {
            mu1: 1e-6,
            mu2: 1e-6,
            sigma: 1e-6,
            b: 1e-6,
            ..Default::default()
        };
        let cfg = SchemeConfig { cfl_safety: 0.9, ..Default::default() };
        let dt = cfl_timestep(&g, 0.01, &params, &cfg);
        assert!((dt - 0.009).abs() < 1e-15);
    }

    #[test]
    fn cfl_source_limited() {
        let g = grid(4);
        let cfg = SchemeConfig { cfl_safety: 1.0, ..Default::default() };
        // 1 + 1 * 3.2 * 1 * 1 + 1 + 1 * 2 = 7.2
        let params = PhysParams {
            mu1: 1.0,
            mu2: 1.0,
            sigma: 1.0,
            b: 1.0,
            ..Default::default()
        };
        assert_eq!(source_rate_bound(&g, &params), 7.2);
        assert_eq!(cfl_timestep(&g, 1e6, &params, &cfg), 1.0 / 7.2);
        let half = SchemeConfig { cfl_safety: 0.5, ..cfg };
        assert_eq!(cfl_timestep(&g, 1e6, &params, &half), 0.5 / 7.2);

        // source bound exactly 1 and dx / nu = 2
        let unit = PhysParams {
            mu1: 0.5,
            sigma: 0.25,
            b: 0.125,
            ..PhysParams::default().with_chi(0.0)
        };
        assert_eq!(source_rate_bound(&g, &unit), 1.0);
        assert_eq!(cfl_timestep(&g, 2.0, &unit, &cfg), 1.0);
    }

    #[test]
    fn transport_constant_is_bitwise_fixed() {
        let f = KineticField::from_fn(17, 0.1, grid(8), |_, v| 0.3 + v * v).unwrap();
        let out = transport_step(&f, 0.09).unwrap();
        assert_eq!(out, f);
    }

    #[test]
    fn transport_unit_courant_shifts_pulse() {
        // nodes +-0.5, dx = 0.25, dt = 0.5 gives |v| dt / dx = 1
        let g = grid(2);
        let mut f = KineticField::zeros(6, 0.25, g).unwrap();
        f.row_mut(2)[1] = 3.0; // v = +0.5
        f.row_mut(4)[0] = 2.0; // v = -0.5
        let out = transport_step(&f, 0.5).unwrap();
        let mut expected = KineticField::zeros(6, 0.25, Arc::clone(f.grid())).unwrap();
        expected.row_mut(3)[1] = 3.0;
        expected.row_mut(3)[0] = 2.0;
        assert_eq!(out, expected);
        // wrap-around
        let mut edge = KineticField::zeros(6, 0.25, Arc::clone(f.grid())).unwrap();
        edge.row_mut(5)[1] = 1.0;
        edge.row_mut(0)[0] = 1.0;
        let out = transport_step(&edge, 0.5).unwrap();
        assert_eq!(out.row(0)[1], 1.0);
        assert_eq!(out.row(5)[0], 1.0);
    }

    #[test]
    fn transport_rejects_cfl_violation() {
        let f = KineticField::zeros(4, 0.1, grid(2)).unwrap();
        assert!(matches!(transport_step(&f, 0.3), Err(Error::Cfl { .. })));
        assert!(transport_step(&f, 0.2).is_ok());
    }

    #[test]
    fn transport_conserves_mass_and_sign() {
        let f = KineticField::from_fn(64, 1.0 / 64.0, grid(16), |x, v| {
            (-(x - 0.4).powi(2) * 80.0).exp() * (1.0 + 0.5 * v)
        })
        .unwrap();
        let m0 = mass(&f);
        let mut cur = f;
        for _ in 0..200 {
            cur = transport_step(&cur, 0.9 / 64.0).unwrap();
            assert!(cur.min_value() >= 0.0);
        }
        assert!(rel(mass(&cur), m0) < 1e-13);
    }

    #[test]
    fn transport_sine_converges_first_order() {
        // one velocity pair, compare with the exact translate of sin(2 pi x)
        let g = grid(2);
        let errors: Vec<f64> = [64usize, 128, 256, 512]
            .iter()
            .map(|&n_x| {
                let dx = 1.0 / n_x as f64;
                let f = KineticField::from_fn(n_x, dx, Arc::clone(&g), |x, _| {
                    (2.0 * std::f64::consts::PI * x).sin()
                })
                .unwrap();
                let t_end = 0.5;
                let (count, dt) = uniform_steps(t_end, 0.8 * dx / 0.5);
                let mut cur = f;
                for _ in 0..count {
                    cur = transport_step(&cur, dt).unwrap();
                }
                let mut err = 0.0;
                for i in 0..n_x {
                    let x = cur.cell_center(i);
                    for (j, &v) in g.nodes().iter().enumerate() {
                        let exact = (2.0 * std::f64::consts::PI * (x - v * t_end)).sin();
                        err += dx * g.weights()[j] * (cur.row(i)[j] - exact).powi(2);
                    }
                }
                err.sqrt()
            })
            .collect();
        for w in errors.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!((order - 1.0).abs() < 0.2, "order {order}, errors {errors:?}");
        }
    }

    #[test]
    fn relaxation_fixed_point_and_half_decay() {
        let g = grid(8);
        let params = PhysParams::default();
        let eq = KineticField::from_profiles(3, 0.1, Arc::clone(&g), |i, _| {
            equilibrium(1.0 + i as f64, 0.1 * i as f64, &g)
        })
        .unwrap();
        let out = relaxation_step_exact(&eq, &params, 0.3);
        for (a, b) in out.values().iter().zip(eq.values()) {
            assert!((a - b).abs() <= 4.0 * f64::EPSILON * b.abs().max(1.0));
        }

        // mu0 dt / eps = ln 2 halves the deviation
        let f = KineticField::from_fn(3, 0.1, Arc::clone(&g), |x, v| 1.0 + x + v * v * v).unwrap();
        let dt = params.eps * std::f64::consts::LN_2 / params.mu0;
        let out = relaxation_step_exact(&f, &params, dt);
        for i in 0..3 {
            let (n, j) = g.density_and_flux(f.row(i));
            let target = equilibrium(n, j, &g);
            for k in 0..g.len() {
                let before = f.row(i)[k] - target[k];
                let after = out.row(i)[k] - target[k];
                assert!((after - 0.5 * before).abs() < 1e-14, "{after} vs {before}");
            }
        }
    }

    #[test]
    fn relaxation_projection_limit() {
        let g = grid(8);
        let params = PhysParams::default().with_eps(1e-300);
        let f = KineticField::from_fn(2, 0.5, Arc::clone(&g), |_, v| 1.0 + v.powi(3)).unwrap();
        let out = relaxation_step_exact(&f, &params, 0.01);
        for i in 0..2 {
            let (n, j) = g.density_and_flux(f.row(i));
            assert_eq!(out.row(i), &equilibrium(n, j, &g)[..]);
        }
    }

    #[test]
    fn taxis_source_cases() {
        let g = grid(8);
        let params = PhysParams::default().with_chi(0.0);
        let iso = KineticField::from_fn(4, 0.25, Arc::clone(&g), |_, _| 0.7).unwrap();
        let s = vec![1.0; 4];
        let out = taxis_source_step(&iso, &s, &params, 0.05).unwrap();
        assert_eq!(out, iso);

        // chi = 0: pure relaxation toward n / |V| at rate mu1
        let f = KineticField::from_fn(4, 0.25, Arc::clone(&g), |x, v| 1.0 + x * v + v * v).unwrap();
        let dt = 0.05;
        let out = taxis_source_step(&f, &s, &params, dt).unwrap();
        for i in 0..4 {
            let n = g.moment(f.row(i), 0).unwrap();
            for k in 0..g.len() {
                let expect = f.row(i)[k] + dt * params.mu1 * (n / g.measure() - f.row(i)[k]);
                assert!((out.row(i)[k] - expect).abs() < 1e-15);
            }
        }
        assert!(taxis_source_step(&f, &[1.0; 3], &params, dt).is_err());
        assert!(taxis_source_step(&f, &[-1.0; 4], &params, dt).is_ok());
        assert!(matches!(
            taxis_source_step(&f, &[-1.0; 4], &params.with_chi(1.0), dt),
            Err(Error::NegativeDensity(_))
        ));
    }

    #[test]
    fn chemo_source_cases() {
        let g = grid(8);
        let params = PhysParams::default();
        // a n = b S with g isotropic is a fixed point
        let s_star = params.a * 2.0 / params.b;
        let gf = KineticField::from_fn(4, 0.25, Arc::clone(&g), |_, _| s_star / g.measure()).unwrap();
        let out = chemo_source_step(&gf, &[2.0; 4], &params, 0.05).unwrap();
        for (a, b) in out.values().iter().zip(gf.values()) {
            assert!((a - b).abs() < 1e-15);
        }

        // n = 0 and b ~ 0: relaxation toward S / |V| at rate sigma
        let p = PhysParams { b: 1e-300, ..params };
        let gf = KineticField::from_fn(2, 0.5, Arc::clone(&g), |_, v| 1.0 + v).unwrap();
        let dt = 0.01;
        let out = chemo_source_step(&gf, &[0.0; 2], &p, dt).unwrap();
        let s = g.moment(gf.row(0), 0).unwrap();
        for k in 0..g.len() {
            let expect = gf.row(0)[k] + dt * p.sigma * (s / g.measure() - gf.row(0)[k]);
            assert!((out.row(0)[k] - expect).abs() < 1e-15);
        }

        // v-integral of the update is dt |V| (a n - b S)
        let gf = KineticField::from_fn(3, 0.5, Arc::clone(&g), |x, v| 1.0 + x + v * v).unwrap();
        let n = [0.3, 1.2, 2.0];
        let out = chemo_source_step(&gf, &n, &params, dt).unwrap();
        for i in 0..3 {
            let s0 = g.moment(gf.row(i), 0).unwrap();
            let s1 = g.moment(out.row(i), 0).unwrap();
            let expect = dt * g.measure() * (params.a * n[i] - params.b * s0);
            assert!((s1 - s0 - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn steady_state_is_preserved() {
        let g = grid(16);
        let params = PhysParams { eps: 10.0, ..PhysParams::default().with_chi(0.0) };
        let cfg = SchemeConfig::default();
        let n_star = 1.5;
        let s_star = params.a * n_star / params.b;
        let f = KineticField::from_fn(20, 0.05, Arc::clone(&g), |_, _| n_star / g.measure()).unwrap();
        let gg = KineticField::from_fn(20, 0.05, Arc::clone(&g), |_, _| s_star / g.measure()).unwrap();
        let s0 = SimState::new(f, gg).unwrap();
        let s1 = step(&s0, &params, &cfg).unwrap();
        for (a, b) in s1.f.values().iter().zip(s0.f.values()) {
            assert!(rel(*a, *b) < 1e-12);
        }
        for (a, b) in s1.g.values().iter().zip(s0.g.values()) {
            assert!(rel(*a, *b) < 1e-12);
        }
        assert_eq!(s1.step_count, 1);
        assert!(s1.t > 0.0);
    }

    #[test]
    fn one_step_on_pulse_conserves_f_mass() {
        let g = grid(16);
        let params = PhysParams::default();
        let cfg = SchemeConfig::default();
        let f = KineticField::from_fn(50, 0.02, Arc::clone(&g), |x, _| {
            (-(x - 0.5).powi(2) / 0.005).exp()
        })
        .unwrap();
        let gg = KineticField::zeros(50, 0.02, Arc::clone(&g)).unwrap();
        let s0 = SimState::new(f, gg).unwrap();
        let s1 = step(&s0, &params, &cfg).unwrap();
        assert!(rel(mass(&s1.f), mass(&s0.f)) < 1e-12);
    }

    #[test]
    fn nan_is_reported_with_location() {
        let g = grid(4);
        let mut f = KineticField::zeros(3, 0.1, Arc::clone(&g)).unwrap();
        f.row_mut(1)[2] = f64::NAN;
        let gg = KineticField::zeros(3, 0.1, g).unwrap();
        let s0 = SimState::new(f, gg).unwrap();
        let err = step(&s0, &PhysParams::default(), &SchemeConfig::default()).unwrap_err();
        assert!(err.is_numerical());
        match err {
            Error::NonFinite { substep, .. } => assert_eq!(substep, "transport(f)"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn run_edge_cases() {
        let g = grid(8);
        let params = PhysParams::default();
        let zero = SimState::new(
            KineticField::zeros(10, 0.1, Arc::clone(&g)).unwrap(),
            KineticField::zeros(10, 0.1, Arc::clone(&g)).unwrap(),
        )
        .unwrap();
        let cfg = SchemeConfig { t_end: 0.5, ..Default::default() };
        let out = run(&zero, &params, &cfg, &mut NullSink).unwrap();
        assert!(out.f.values().iter().chain(out.g.values()).all(|&x| x == 0.0));
        assert_eq!(out.t, 0.5);

        let cfg0 = SchemeConfig { t_end: 0.0, ..Default::default() };
        let mut seen = 0;
        let out = run(&zero, &params, &cfg0, &mut |_s: &SimState| {
            seen += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(out.step_count, 0);
        assert_eq!(out, zero);
        assert_eq!(seen, 1);
    }

    #[test]
    fn run_is_reproducible_and_emits_cadence() {
        let g = grid(8);
        let params = PhysParams::default();
        let f = KineticField::from_fn(16, 1.0 / 16.0, Arc::clone(&g), |x, v| {
            1.0 + 0.5 * (6.0 * x).cos() + 0.1 * v
        })
        .unwrap();
        let s0 = SimState::new(f, KineticField::zeros(16, 1.0 / 16.0, g).unwrap()).unwrap();
        let cfg = SchemeConfig { t_end: 0.3, snapshot_every: 3, ..Default::default() };
        let collect = || {
            let mut snaps = Vec::new();
            let last = run(&s0, &params, &cfg, &mut |s: &SimState| {
                snaps.push(s.clone());
                Ok(())
            })
            .unwrap();
            (snaps, last)
        };
        let (a, last_a) = collect();
        let (b, last_b) = collect();
        assert_eq!(a, b);
        assert_eq!(last_a, last_b);
        let steps: Vec<u64> = a.iter().map(|s| s.step_count).collect();
        assert_eq!(steps[0], 0);
        assert!(steps[1..].iter().all(|k| k % 3 == 0 || *k == last_a.step_count));
        assert_eq!(*steps.last().unwrap(), last_a.step_count);
        let m = compute_moments(&last_a).unwrap();
        assert_eq!(m.n.len(), 16);
    }

    #[test]
    fn clipping_removes_negatives() {
        let g = grid(8);
        let params = PhysParams::default().with_chi(50.0);
        let f = KineticField::from_fn(8, 0.125, Arc::clone(&g), |x, v| {
            if x < 0.3 { 1.0 + v } else { 0.0 }
        })
        .unwrap();
        let gg = KineticField::from_fn(8, 0.125, g, |_, _| 1.0).unwrap();
        let s0 = SimState::new(f, gg).unwrap();
        let cfg = SchemeConfig { clip_negative: true, ..Default::default() };
        let s1 = step(&s0, &params, &cfg).unwrap();
        assert!(s1.f.min_value() >= 0.0);
        assert!(s1.g.min_value() >= 0.0);
    }
}
