//! Discrete-velocity simulation of a kinetic chemotaxis system under hyperbolic
//! scaling, a solver for its macroscopic Cattaneo limit, and a set of
//! executable checks (mass laws, L2 energy growth, relaxation to equilibrium,
//! convergence of the kinetic moments toward the limit as `eps -> 0`).
//!
//! The spatial domain is a periodic interval and the velocity set is a
//! symmetric midpoint grid on `[-nu, nu]`.

// `!(x >= 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cattaneo;
pub mod cli;
pub mod error;
pub mod io;
pub mod kinetic;
pub mod state;
pub mod velocity_grid;
pub mod verification;

pub use cattaneo::CattaneoState;
pub use error::{Error, Result};
pub use io::config::{parse_config, RunConfig};
pub use kinetic::{SchemeConfig, SnapshotSink};
pub use state::{KineticField, MacroMoments, PhysParams, SimState, TaxisFunction};
pub use velocity_grid::VelocityGrid;
