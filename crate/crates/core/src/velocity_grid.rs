//! Symmetric discrete velocity sets on `[-nu, nu]`.
//!
//! Nodes are stored in ascending order and node `j` is paired with node
//! `n_v - 1 - j`, its exact negative with an identical weight. Every
//! velocity reduction in the crate goes through [`VelocityGrid::moment`],
//! which adds each symmetric pair first and then accumulates the pair sums
//! left to right with Neumaier compensation. Odd moments of even profiles
//! therefore cancel exactly, and results do not depend on thread layout.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct VelocityGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    nu: f64,
    measure: f64,
    gamma_sq: f64,
}

impl VelocityGrid {
    /// Midpoint rule on `n_v` uniform cells of `[-nu, nu]`.
    ///
    /// Only the negative half is computed from the midpoint formula; the
    /// positive half is its bitwise mirror. `gamma_sq` is computed from the
    /// stored nodes and weights so that the first moment of the equilibrium
    /// reproduces the flux at the discrete level.
    pub fn build_uniform_symmetric(nu: f64, n_v: usize) -> Result<Self> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::InvalidSpeedBound(nu));
        }
        if n_v < 2 || !n_v.is_multiple_of(2) {
            return Err(Error::OddNodeCount(n_v));
        }
        let h = 2.0 * nu / n_v as f64;
        let half = n_v / 2;
        let mut nodes = vec![0.0; n_v];
        for j in 0..half {
            let v = -nu + (j as f64 + 0.5) * h;
            nodes[j] = v;
            nodes[n_v - 1 - j] = -v;
        }
        let weights = vec![h; n_v];
        let mut grid = VelocityGrid {
            nodes,
            weights,
            nu,
            measure: 0.0,
            gamma_sq: 0.0,
        };
        let ones = vec![1.0; n_v];
        grid.measure = grid.moment_unchecked(&ones, 0);
        grid.gamma_sq = grid.measure / grid.moment_unchecked(&ones, 2);
        Ok(grid)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Speed bound `nu`.
    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Largest stored `|v_j|`. Strictly below `nu` for the midpoint rule.
    pub fn max_speed(&self) -> f64 {
        self.nodes.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Discrete `|V| = sum_j w_j`.
    pub fn measure(&self) -> f64 {
        self.measure
    }

    /// Discrete `gamma^2 = |V| / sum_j w_j v_j^2`.
    pub fn gamma_sq(&self) -> f64 {
        self.gamma_sq
    }

    /// Index of the node carrying velocity `-v_j`.
    #[inline]
    pub fn mirror(&self, j: usize) -> usize {
        self.nodes.len() - 1 - j
    }

    /// `sum_j w_j v_j^order profile_j` with length and order checks.
    pub fn moment(&self, profile: &[f64], order: u32) -> Result<f64> {
        if profile.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: profile.len(),
            });
        }
        if order > 2 {
            return Err(Error::InvalidMomentOrder(order));
        }
        Ok(self.moment_unchecked(profile, order))
    }

    /// Pairwise moment without validation. Caller guarantees the length and `order <= 2`.
    pub(crate) fn moment_unchecked(&self, profile: &[f64], order: u32) -> f64 {
        debug_assert_eq!(profile.len(), self.len());
        let n = self.len();
        let mut acc = NeumaierSum::default();
        for p in 0..n / 2 {
            let q = n - 1 - p;
            acc.add(self.term(p, profile[p], order) + self.term(q, profile[q], order));
        }
        acc.total()
    }

    /// Zeroth and first moment in one pass, same summation order as [`Self::moment`].
    pub(crate) fn density_and_flux(&self, profile: &[f64]) -> (f64, f64) {
        let n = self.len();
        let mut n0 = NeumaierSum::default();
        let mut n1 = NeumaierSum::default();
        for p in 0..n / 2 {
            let q = n - 1 - p;
            n0.add(self.term(p, profile[p], 0) + self.term(q, profile[q], 0));
            n1.add(self.term(p, profile[p], 1) + self.term(q, profile[q], 1));
        }
        (n0.total(), n1.total())
    }

    /// `sum_j w_j |v_j|^order |profile_j|`: the magnitude against which
    /// rounding in [`Self::moment`] is measured.
    pub fn moment_scale(&self, profile: &[f64], order: u32) -> f64 {
        profile
            .iter()
            .enumerate()
            .map(|(j, h)| self.term(j, h.abs(), order).abs())
            .sum()
    }

    #[inline]
    fn term(&self, j: usize, h: f64, order: u32) -> f64 {
        let w = self.weights[j];
        let v = self.nodes[j];
        match order {
            0 => w * h,
            1 => (w * v) * h,
            _ => (w * (v * v)) * h,
        }
    }
}

/// `sum_j w_j v_j^order profile_j` over a grid.
pub fn discrete_moment(grid: &VelocityGrid, profile: &[f64], order: u32) -> Result<f64> {
    grid.moment(profile, order)
}

/// Neumaier compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    #[inline]
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub(crate) fn total(self) -> f64 {
        self.sum + self.comp
    }
}
