//! Shared test fixtures: reference cases and an independent ODE integrator.

#![allow(dead_code)]

use std::sync::Arc;

use kinetic_chemotaxis::state::equilibrium;
use kinetic_chemotaxis::{KineticField, PhysParams, SimState, VelocityGrid};

pub fn grid(nu: f64, n_v: usize) -> Arc<VelocityGrid> {
    Arc::new(VelocityGrid::build_uniform_symmetric(nu, n_v).unwrap())
}

/// Well-prepared `n0 = 1 + 0.5 cos(2 pi x)` on the unit interval, `g0 = s0 / |V|`.
pub fn cosine_state(n_x: usize, n_v: usize, s0: f64) -> SimState {
    let grid = grid(1.0, n_v);
    let dx = 1.0 / n_x as f64;
    let f = KineticField::from_profiles(n_x, dx, Arc::clone(&grid), |_, x| {
        equilibrium(1.0 + 0.5 * (2.0 * std::f64::consts::PI * x).cos(), 0.0, &grid)
    })
    .unwrap();
    let g0 = s0 / grid.measure();
    let g = KineticField::from_fn(n_x, dx, grid, |_, _| g0).unwrap();
    SimState::new(f, g).unwrap()
}

/// Right-hand side of the x-independent system, written out directly from
/// the model: relaxation, turning/taxis, and chemoattractant kinetics.
/// `y = [f_0..f_{m-1}, g_0..g_{m-1}]`.
pub fn homogeneous_rhs(grid: &VelocityGrid, p: &PhysParams, y: &[f64], dy: &mut [f64]) {
    let m = grid.len();
    let (f, g) = y.split_at(m);
    let (v, w) = (grid.nodes(), grid.weights());
    let measure: f64 = w.iter().sum();
    let m2: f64 = (0..m).map(|k| w[k] * v[k] * v[k]).sum();
    let gamma_sq = measure / m2;
    let n: f64 = (0..m).map(|k| w[k] * f[k]).sum();
    let j: f64 = (0..m).map(|k| w[k] * v[k] * f[k]).sum();
    let s: f64 = (0..m).map(|k| w[k] * g[k]).sum();
    let alpha = p.taxis.chi * s / (1.0 + s);
    for k in 0..m {
        let eq = (n + gamma_sq * j * v[k]) / measure;
        dy[k] = p.mu0 / p.eps * (eq - f[k]) + p.mu1 * (n / measure - f[k])
            - p.mu2 * gamma_sq * (j / measure - v[k] * f[k]) * alpha;
        dy[m + k] = p.sigma * (s / measure - g[k]) + p.a * n - p.b * s;
    }
}

/// Adaptive Dormand-Prince 5(4) with mixed absolute/relative tolerance.
/// Returns the solution at each requested time (ascending, starting >= 0).
pub fn dopri5<F>(rhs: F, y0: &[f64], times: &[f64], tol: f64) -> Vec<Vec<f64>>
where
    F: Fn(&[f64], &mut [f64]),
{
    const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
    let dim = y0.len();
    let mut y = y0.to_vec();
    let mut t = 0.0;
    let mut h: f64 = 1e-4;
    let mut k = vec![vec![0.0; dim]; 7];
    let mut stage = vec![0.0; dim];
    let mut y5 = vec![0.0; dim];
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        while t < target {
            let step = h.min(target - t);
            rhs(&y, &mut k[0]);
            for s in 1..7 {
                for d in 0..dim {
                    stage[d] = y[d] + step * (0..s).map(|r| A[s][r] * k[r][d]).sum::<f64>();
                }
                let (_, rest) = k.split_at_mut(s);
                rhs(&stage, &mut rest[0]);
            }
            let _ = C;
            let mut err: f64 = 0.0;
            for d in 0..dim {
                y5[d] = y[d] + step * (0..7).map(|r| B5[r] * k[r][d]).sum::<f64>();
                let y4 = y[d] + step * (0..7).map(|r| B4[r] * k[r][d]).sum::<f64>();
                let scale = tol * (1.0 + y[d].abs().max(y5[d].abs()));
                err = err.max((y5[d] - y4).abs() / scale);
            }
            if err <= 1.0 {
                t += step;
                y.copy_from_slice(&y5);
            }
            let factor = if err == 0.0 { 5.0 } else { 0.9 * err.powf(-0.2) };
            h = step * factor.clamp(0.2, 5.0);
        }
        out.push(y.clone());
    }
    out
}
