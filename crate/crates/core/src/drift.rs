//! The shift `x(t)`: one-sided window averages of the velocity field,
//! Heun integration, discrete interface traces, and the exact
//! characteristics oracle for the Burgers example with growing drift.

use serde::{Deserialize, Serialize};

use crate::constants::ShiftVelocity;
use crate::error::{Error, Result};
use crate::field::FieldSnapshot;
use crate::state::StateVector;
use crate::systems::ConservationLaw;

/// One-sided traces `U(t, x(t)-)` and `U(t, x(t)+)` read off the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePair {
    pub left: StateVector,
    pub right: StateVector,
    pub stencil_skip: usize,
}

/// Cells `stencil_skip + 1` to the left and right of the cell containing `x`.
pub fn interface_traces(field: &FieldSnapshot, x: f64, stencil_skip: usize) -> Result<TracePair> {
    let g = &field.grid;
    let i = g
        .cell_index(x)
        .ok_or_else(|| Error::OutOfRange(format!("trace position {x} is outside the grid")))?;
    let k = stencil_skip + 1;
    if i < k || i + k >= g.n_cells {
        return Err(Error::OutOfRange(format!(
            "trace stencil of {k} cells around cell {i} leaves the grid of {} cells",
            g.n_cells
        )));
    }
    Ok(TracePair {
        left: field.cells[i - k],
        right: field.cells[i + k],
        stencil_skip,
    })
}

/// Average of `V` over the window `[x, x + h]` with its extreme cell values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowVelocity {
    pub mean: f64,
    pub vmin: f64,
    pub vmax: f64,
}

/// Exact cell-overlap average of `V(U)` over `[x, x + window_h]`.
pub fn filippov_velocity(
    law: &dyn ConservationLaw,
    sv: &ShiftVelocity,
    field: &FieldSnapshot,
    x: f64,
    window_h: f64,
) -> Result<WindowVelocity> {
    let g = &field.grid;
    if !(window_h > 0.0) {
        return Err(Error::Config(format!("window width {window_h} must be positive")));
    }
    let end = x + window_h;
    if !(x >= g.x_min && end <= g.x_max) {
        return Err(Error::OutOfRange(format!(
            "velocity window [{x}, {end}] leaves [{}, {}]",
            g.x_min, g.x_max
        )));
    }
    let first = g.cell_index(x).expect("checked above");
    let (mut acc, mut vmin, mut vmax) = (0.0, f64::INFINITY, f64::NEG_INFINITY);
    for i in first..g.n_cells {
        let lo = g.edge(i).max(x);
        let hi = g.edge(i + 1).min(end);
        if hi > lo {
            let val = sv.eval(law, &field.cells[i])?;
            acc += val * (hi - lo);
            vmin = vmin.min(val);
            vmax = vmax.max(val);
        }
        if g.edge(i + 1) >= end {
            break;
        }
    }
    let mean = (acc / window_h).clamp(vmin, vmax);
    Ok(WindowVelocity { mean, vmin, vmax })
}

/// One Heun step of the drift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftStep {
    pub x_new: f64,
    pub xdot: f64,
    /// Extremes of `V` over the window cells of both stages.
    pub vmin: f64,
    pub vmax: f64,
}

/// `k1` from the field at the start of the step, `k2` from the updated
/// field at the predicted position; `x' = (k1 + k2) / 2`.
pub fn advance_drift(
    law: &dyn ConservationLaw,
    sv: &ShiftVelocity,
    old: &FieldSnapshot,
    new: &FieldSnapshot,
    x: f64,
    dt: f64,
    window_h: f64,
) -> Result<DriftStep> {
    let k1 = filippov_velocity(law, sv, old, x, window_h)?;
    let k2 = filippov_velocity(law, sv, new, x + dt * k1.mean, window_h)?;
    let xdot = 0.5 * (k1.mean + k2.mean);
    Ok(DriftStep {
        x_new: x + dt * xdot,
        xdot,
        vmin: k1.vmin.min(k2.vmin),
        vmax: k1.vmax.max(k2.vmax),
    })
}

/// Time series of the drift and its per-step audit values.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DriftTrajectory {
    pub times: Vec<f64>,
    pub positions: Vec<f64>,
    pub velocities: Vec<f64>,
    pub traces: Vec<TracePair>,
    pub vmin: Vec<f64>,
    pub vmax: Vec<f64>,
    pub dissipation: Vec<f64>,
}

impl DriftTrajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Steps with `x'` outside `[vmin - tol, vmax + tol]`.
    pub fn sandwich_violations(&self, tol: f64) -> usize {
        self.velocities
            .iter()
            .zip(self.vmin.iter().zip(&self.vmax))
            .filter(|(v, (lo, hi))| **v < **lo - tol || **v > **hi + tol)
            .count()
    }

    /// Largest `|x'|`.
    pub fn max_speed(&self) -> f64 {
        self.velocities.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Exact drift of the Burgers example from its characteristics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicsSeries {
    pub r: f64,
    pub eps: f64,
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub xdot: Vec<f64>,
    /// `y(t) <= 4 t` at every sample.
    pub foot_bound_holds: bool,
    /// `x'(t) >= sqrt(2 r eps) / (1 + 4t)^(1/2 + r)` at every sample.
    pub speed_bound_holds: bool,
}

/// `u0(-y)` and `du0/dx(-y)` on the left branch, `y >= 0`.
fn left_profile(r: f64, k: f64, y: f64) -> (f64, f64) {
    let p = 0.5 + r;
    let base = 1.0 + y;
    (1.0 + k * base.powf(-p), k * p * base.powf(-p - 1.0))
}

/// Classical RK4 on `x' = u0(-y) - 1`, `y' = (u0(-y) + 1) / (1 + 2t u0'(-y))`
/// from `x = y = 0`, sampled at `n_steps + 1` equally spaced times.
pub fn characteristics_drift_burgers(
    r: f64,
    eps: f64,
    t_end: f64,
    n_steps: usize,
) -> Result<CharacteristicsSeries> {
    if !(r > 0.0 && r < 0.5) {
        return Err(Error::Parameter(format!("r = {r} must lie in (0, 1/2)")));
    }
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::Parameter(format!("eps = {eps} must be nonnegative")));
    }
    if !(t_end > 0.0) || n_steps == 0 {
        return Err(Error::Parameter("need a positive horizon and at least one step".into()));
    }
    let k = (2.0 * r * eps).sqrt();
    let rhs = |t: f64, y: f64| -> Result<(f64, f64)> {
        let (u, du) = left_profile(r, k, y.max(0.0));
        let den = 1.0 + 2.0 * t * du;
        if !(den > 0.0) {
            return Err(Error::Integration(format!("characteristic denominator {den} at t = {t}")));
        }
        Ok((u - 1.0, (u + 1.0) / den))
    };
    let h = t_end / n_steps as f64;
    let (mut x, mut y) = (0.0, 0.0);
    let mut out = CharacteristicsSeries {
        r,
        eps,
        t: Vec::with_capacity(n_steps + 1),
        x: Vec::with_capacity(n_steps + 1),
        y: Vec::with_capacity(n_steps + 1),
        xdot: Vec::with_capacity(n_steps + 1),
        foot_bound_holds: true,
        speed_bound_holds: true,
    };
    for i in 0..=n_steps {
        let t = i as f64 * h;
        let (xd, _) = rhs(t, y)?;
        out.t.push(t);
        out.x.push(x);
        out.y.push(y);
        out.xdot.push(xd);
        out.foot_bound_holds &= y <= 4.0 * t + 1e-12;
        out.speed_bound_holds &= xd >= k / (1.0 + 4.0 * t).powf(0.5 + r) - 1e-15;
        if i == n_steps {
            break;
        }
        let (a1, b1) = rhs(t, y)?;
        let (a2, b2) = rhs(t + 0.5 * h, y + 0.5 * h * b1)?;
        let (a3, b3) = rhs(t + 0.5 * h, y + 0.5 * h * b2)?;
        let (a4, b4) = rhs(t + h, y + h * b3)?;
        x += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
        y += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
    }
    Ok(out)
}

/// The lower bound on `x(t)` as stated for `t >= 1`:
/// `sqrt(2 r eps) (1 + 4t)^(1/2 - r) / (2 (1 - 2r))`.
pub fn prop14_stated_bound(r: f64, eps: f64, t: f64) -> f64 {
    (2.0 * r * eps).sqrt() * (1.0 + 4.0 * t).powf(0.5 - r) / (2.0 * (1.0 - 2.0 * r))
}

/// Integral of the speed bound from 0 to `t`:
/// `sqrt(2 r eps) ((1 + 4t)^(1/2 - r) - 1) / (2 (1 - 2r))`.
pub fn prop14_integrated_bound(r: f64, eps: f64, t: f64) -> f64 {
    (2.0 * r * eps).sqrt() * ((1.0 + 4.0 * t).powf(0.5 - r) - 1.0) / (2.0 * (1.0 - 2.0 * r))
}
