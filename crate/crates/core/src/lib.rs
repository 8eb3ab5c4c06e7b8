//! Numerical laboratory for relative-entropy contraction of extremal shocks in
//! 1D systems of conservation laws.
//!
//! The crate builds the weighted pseudo-norm `E_a` around a shock
//! `(U_L, U_R, sigma)`, constructs the shift `x(t)` from the velocity field
//! `V(U)`, runs first-order finite-volume simulations and checks the
//! contraction, drift and stability inequalities along the way.
//!
//! Module map:
//! - [`systems`]: conservation-law descriptors (Burgers, isentropic and full Euler)
//! - [`relent`]: relative entropy, relative flux and the pseudo-norm
//! - [`hugoniot`]: shock curves and the dissipation identities
//! - [`constants`]: `v`, `C0`, `beta`, `epsilon`, `a` and the velocity field
//! - [`solver`]: grids, numerical fluxes, time stepping and initial data
//! - [`drift`]: traces, the discrete Filippov shift and the exact Burgers example
//! - [`monitor`]: verdicts on `E_a`, the drift and the `L^2` distance
//! - [`harness`]: scenario configuration, runs, persistence and the check suite

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::wrong_self_convention)]

pub mod constants;
pub mod drift;
pub mod error;
pub mod field;
pub mod harness;
pub mod hugoniot;
pub mod monitor;
pub mod numerics;
pub mod relent;
pub mod solver;
pub mod state;
pub mod systems;

pub use error::{Error, Result};
pub use field::{FieldSnapshot, Grid1D};
pub use state::StateVector;
