//! Phase-space fields, velocity moments, the local equilibrium and the taxis function.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::velocity_grid::VelocityGrid;

/// One distribution sampled on periodic cells `x_i = (i + 1/2) dx` times the velocity nodes.
///
/// Storage is row-major with one row of `n_v` values per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct KineticField {
    values: Vec<f64>,
    n_x: usize,
    dx: f64,
    grid: Arc<VelocityGrid>,
}

impl KineticField {
    pub fn zeros(n_x: usize, dx: f64, grid: Arc<VelocityGrid>) -> Result<Self> {
        if n_x == 0 {
            return Err(Error::param("n_x", "must be at least 1"));
        }
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(Error::param("dx", format!("must be positive, got {dx}")));
        }
        Ok(KineticField {
            values: vec![0.0; n_x * grid.len()],
            n_x,
            dx,
            grid,
        })
    }

    /// Samples `value(x, v)` at cell centres and velocity nodes.
    pub fn from_fn(
        n_x: usize,
        dx: f64,
        grid: Arc<VelocityGrid>,
        value: impl Fn(f64, f64) -> f64,
    ) -> Result<Self> {
        let mut field = Self::zeros(n_x, dx, grid)?;
        for i in 0..n_x {
            let x = field.cell_center(i);
            let grid = Arc::clone(&field.grid);
            for (out, &v) in field.row_mut(i).iter_mut().zip(grid.nodes()) {
                *out = value(x, v);
            }
        }
        Ok(field)
    }

    /// Builds a field cell by cell from a per-cell velocity profile.
    pub fn from_profiles(
        n_x: usize,
        dx: f64,
        grid: Arc<VelocityGrid>,
        mut profile: impl FnMut(usize, f64) -> Vec<f64>,
    ) -> Result<Self> {
        let mut field = Self::zeros(n_x, dx, grid)?;
        for i in 0..n_x {
            let row = profile(i, field.cell_center(i));
            if row.len() != field.n_v() {
                return Err(Error::LengthMismatch {
                    expected: field.n_v(),
                    got: row.len(),
                });
            }
            field.row_mut(i).copy_from_slice(&row);
        }
        Ok(field)
    }

    /// Wraps existing row-major data.
    pub fn from_values(
        values: Vec<f64>,
        n_x: usize,
        dx: f64,
        grid: Arc<VelocityGrid>,
    ) -> Result<Self> {
        let mut field = Self::zeros(n_x, dx, grid)?;
        if values.len() != field.values.len() {
            return Err(Error::LengthMismatch {
                expected: field.values.len(),
                got: values.len(),
            });
        }
        field.values = values;
        Ok(field)
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn n_v(&self) -> usize {
        self.grid.len()
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn grid(&self) -> &Arc<VelocityGrid> {
        &self.grid
    }

    pub fn domain_length(&self) -> f64 {
        self.n_x as f64 * self.dx
    }

    pub fn cell_center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n_v = self.n_v();
        &self.values[i * n_v..(i + 1) * n_v]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        let n_v = self.n_v();
        &mut self.values[i * n_v..(i + 1) * n_v]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, f64> {
        self.values.chunks_exact(self.n_v())
    }

    /// Per-cell `sum_j w_j v_j^order value_ij`.
    pub fn cell_moments(&self, order: u32) -> Result<Vec<f64>> {
        if order > 2 {
            return Err(Error::InvalidMomentOrder(order));
        }
        Ok(self
            .rows()
            .map(|row| self.grid.moment_unchecked(row, order))
            .collect())
    }

    /// Per-cell `(n_i, J_i)`.
    pub fn density_and_flux(&self) -> (Vec<f64>, Vec<f64>) {
        self.rows().map(|row| self.grid.density_and_flux(row)).unzip()
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// True when both fields live on the same cells and velocity grid.
    pub fn same_layout(&self, other: &KineticField) -> bool {
        self.n_x == other.n_x
            && self.dx == other.dx
            && (Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid)
    }

    /// First non-finite entry as `(cell, node, value)`.
    pub fn first_non_finite(&self) -> Option<(usize, usize, f64)> {
        let n_v = self.n_v();
        self.values
            .iter()
            .position(|x| !x.is_finite())
            .map(|k| (k / n_v, k % n_v, self.values[k]))
    }
}

/// Per-cell moments of both distributions.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MacroMoments {
    /// `n = <f>`
    pub n: Vec<f64>,
    /// `J = <v f>`
    pub j: Vec<f64>,
    /// `S = <g>`
    pub s: Vec<f64>,
    /// `q = <v g>`
    pub q: Vec<f64>,
    /// `Q = <v^2 g>`
    pub big_q: Vec<f64>,
}

/// Saturating chemotactic sensitivity `alpha(S) = chi S / (1 + S)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaxisFunction {
    pub chi: f64,
}

impl TaxisFunction {
    pub fn new(chi: f64) -> Result<Self> {
        if !(chi >= 0.0 && chi.is_finite()) {
            return Err(Error::param("chi", format!("must be >= 0, got {chi}")));
        }
        Ok(TaxisFunction { chi })
    }

    /// Sup bound of `|alpha|`.
    pub fn alpha_inf(&self) -> f64 {
        self.chi
    }

    /// Global Lipschitz constant of `alpha` on `S >= 0`.
    pub fn lip(&self) -> f64 {
        self.chi
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        alpha_eval(s, self)
    }
}

/// Rejects `S < 0` and NaN, except for `chi = 0` where `alpha` vanishes
/// identically and `S` is not inspected.
pub fn alpha_eval(s: f64, taxis: &TaxisFunction) -> Result<f64> {
    if taxis.chi == 0.0 {
        return Ok(0.0);
    }
    if !(s >= 0.0) {
        return Err(Error::NegativeDensity(s));
    }
    if s.is_infinite() {
        return Ok(taxis.chi);
    }
    Ok(taxis.chi * s / (1.0 + s))
}

/// Model constants. All rates are strictly positive and `eps > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    pub mu0: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub sigma: f64,
    pub a: f64,
    pub b: f64,
    pub eps: f64,
    pub taxis: TaxisFunction,
}

impl Default for PhysParams {
    fn default() -> Self {
        PhysParams {
            mu0: 1.0,
            mu1: 1.0,
            mu2: 1.0,
            sigma: 2.0,
            a: 1.0,
            b: 1.0,
            eps: 0.1,
            taxis: TaxisFunction { chi: 1.0 },
        }
    }
}

impl PhysParams {
    pub fn validate(&self) -> Result<()> {
        let rates = [
            ("mu0", self.mu0),
            ("mu1", self.mu1),
            ("mu2", self.mu2),
            ("sigma", self.sigma),
            ("a", self.a),
            ("b", self.b),
            ("eps", self.eps),
        ];
        for (name, value) in rates {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::param(name, format!("must be positive, got {value}")));
            }
        }
        TaxisFunction::new(self.taxis.chi).map(|_| ())
    }

    pub fn with_eps(self, eps: f64) -> Self {
        PhysParams { eps, ..self }
    }

    pub fn with_chi(self, chi: f64) -> Self {
        PhysParams {
            taxis: TaxisFunction { chi },
            ..self
        }
    }
}

/// Cell and chemoattractant distributions at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub f: KineticField,
    pub g: KineticField,
    pub t: f64,
    pub step_count: u64,
}

impl SimState {
    pub fn new(f: KineticField, g: KineticField) -> Result<Self> {
        if !f.same_layout(&g) {
            return Err(Error::GridMismatch(
                "f and g must share cells and velocity grid".into(),
            ));
        }
        Ok(SimState {
            f,
            g,
            t: 0.0,
            step_count: 0,
        })
    }

    pub fn grid(&self) -> &Arc<VelocityGrid> {
        self.f.grid()
    }

    pub fn n_x(&self) -> usize {
        self.f.n_x()
    }

    pub fn dx(&self) -> f64 {
        self.f.dx()
    }
}

pub fn compute_moments(state: &SimState) -> Result<MacroMoments> {
    if !state.f.same_layout(&state.g) {
        return Err(Error::GridMismatch(
            "f and g must share cells and velocity grid".into(),
        ));
    }
    let (n, j) = state.f.density_and_flux();
    Ok(MacroMoments {
        n,
        j,
        s: state.g.cell_moments(0)?,
        q: state.g.cell_moments(1)?,
        big_q: state.g.cell_moments(2)?,
    })
}

/// `F_j = (n + gamma^2 J v_j) / |V|` with the grid's discrete `|V|` and `gamma^2`.
pub fn equilibrium(n: f64, j: f64, grid: &VelocityGrid) -> Vec<f64> {
    let mut out = vec![0.0; grid.len()];
    equilibrium_into(n, j, grid, &mut out);
    out
}

pub(crate) fn equilibrium_into(n: f64, j: f64, grid: &VelocityGrid, out: &mut [f64]) {
    let scale = grid.gamma_sq() * j;
    let inv = 1.0 / grid.measure();
    for (o, &v) in out.iter_mut().zip(grid.nodes()) {
        *o = (n + scale * v) * inv;
    }
}

/// Even and odd parts of `profile` under `v -> -v`.
pub fn sym_antisym_split(profile: &[f64], grid: &VelocityGrid) -> Result<(Vec<f64>, Vec<f64>)> {
    if profile.len() != grid.len() {
        return Err(Error::LengthMismatch {
            expected: grid.len(),
            got: profile.len(),
        });
    }
    let n = profile.len();
    let mut even = vec![0.0; n];
    let mut odd = vec![0.0; n];
    for p in 0..n / 2 {
        let q = grid.mirror(p);
        let (a, b) = (profile[p], profile[q]);
        let e = 0.5 * (a + b);
        let o = 0.5 * (a - b);
        even[p] = e;
        even[q] = e;
        odd[p] = o;
        odd[q] = -o;
    }
    Ok((even, odd))
}
