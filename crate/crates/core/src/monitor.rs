//! Post-processing of a run: the pseudo-norm series, the contraction
//! verdict, per-step dissipation, and the growth of the shift.

use serde::{Deserialize, Serialize};

use crate::constants::{ContractionConfig, ShiftVelocity};
use crate::drift::TracePair;
use crate::error::{Error, Result};
use crate::numerics::linear_fit;
use crate::systems::ConservationLaw;

/// `x' [eta(U-|U_L) - a eta(U+|U_R)] - F(U-,U_L) + a F(U+,U_R)`.
pub fn dissipation_rate(
    law: &dyn ConservationLaw,
    sv: &ShiftVelocity,
    traces: &TracePair,
    xdot: f64,
) -> f64 {
    let (l, r) = (&traces.left, &traces.right);
    xdot * (sv.left.rel_entropy(law, l) - sv.a * sv.right.rel_entropy(law, r))
        - sv.left.rel_flux(law, l)
        + sv.a * sv.right.rel_flux(law, r)
}

/// [`dissipation_rate`] from a full configuration.
pub fn dissipation_check(
    law: &dyn ConservationLaw,
    cfg: &ContractionConfig,
    traces: &TracePair,
    xdot: f64,
) -> Result<f64> {
    Ok(dissipation_rate(law, &cfg.references(law)?, traces, xdot))
}

/// Per-time series of a run. All vectors have one entry per recorded time.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunSeries {
    pub times: Vec<f64>,
    pub ea: Vec<f64>,
    pub l2_dist: Vec<f64>,
    pub x: Vec<f64>,
    pub xdot: Vec<f64>,
    pub vmin: Vec<f64>,
    pub vmax: Vec<f64>,
    pub dissipation: Vec<f64>,
    /// `sigma` of the reference shock, for `x - sigma t`.
    pub sigma: f64,
}

impl RunSeries {
    pub fn new(sigma: f64) -> Self {
        Self {
            sigma,
            ..Default::default()
        }
    }

    #[allow(clippy::too_many_arguments)]
    pub fn push(&mut self, t: f64, ea: f64, l2: f64, x: f64, xdot: f64, vmin: f64, vmax: f64, d: f64) {
        self.times.push(t);
        self.ea.push(ea);
        self.l2_dist.push(l2);
        self.x.push(x);
        self.xdot.push(xdot);
        self.vmin.push(vmin);
        self.vmax.push(vmax);
        self.dissipation.push(d);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn is_consistent(&self) -> bool {
        let n = self.times.len();
        [
            self.ea.len(),
            self.l2_dist.len(),
            self.x.len(),
            self.xdot.len(),
            self.vmin.len(),
            self.vmax.len(),
            self.dissipation.len(),
        ]
        .iter()
        .all(|&m| m == n)
    }

    /// `x(t) - sigma t`.
    pub fn shift_offset(&self) -> Vec<f64> {
        self.times.iter().zip(&self.x).map(|(t, x)| x - self.sigma * t).collect()
    }

    /// Steps with `x'` outside `[vmin - tol, vmax + tol]`.
    pub fn sandwich_violations(&self, tol: f64) -> usize {
        (0..self.len())
            .filter(|&k| self.xdot[k] < self.vmin[k] - tol || self.xdot[k] > self.vmax[k] + tol)
            .count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContractionVerdict {
    pub pass: bool,
    pub max_violation: f64,
    pub tolerance: f64,
}

pub const DEFAULT_C_TOL: f64 = 5.0;

/// `max_t [E_a(t) - min_{s<=t} E_a(s)]` against `c_tol dx (1 + T)`.
pub fn contraction_verdict(series: &RunSeries, dx: f64, t_end: f64, c_tol: f64) -> Result<ContractionVerdict> {
    if series.is_empty() {
        return Err(Error::Config("contraction verdict on an empty series".into()));
    }
    let mut running = f64::INFINITY;
    let mut worst = 0.0f64;
    for &e in &series.ea {
        running = running.min(e);
        worst = worst.max(e - running);
    }
    let tolerance = c_tol * dx * (1.0 + t_end);
    Ok(ContractionVerdict {
        pass: worst <= tolerance,
        max_violation: worst,
        tolerance,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftBound {
    /// Fitted exponent of `|x - sigma t| ~ c t^p`; `NaN` when vacuous.
    pub p: f64,
    pub constant: f64,
    pub pass: bool,
    /// No point above the noise floor.
    pub vacuous: bool,
    pub points: usize,
}

pub const DRIFT_EXPONENT_MAX: f64 = 0.55;

/// Least-squares fit of `log|x - sigma t|` against `log t` on `[t_lo, T]`,
/// skipping offsets below `floor`.
pub fn drift_exponent(times: &[f64], offsets: &[f64], t_lo: f64, floor: f64) -> DriftBound {
    let (mut lx, mut ly) = (Vec::new(), Vec::new());
    for (t, d) in times.iter().zip(offsets) {
        if *t >= t_lo && d.abs() >= floor && d.abs() > 0.0 {
            lx.push(t.ln());
            ly.push(d.abs().ln());
        }
    }
    match linear_fit(&lx, &ly) {
        Some((p, c)) if lx.len() >= 2 => DriftBound {
            p,
            constant: c.exp(),
            pass: p <= DRIFT_EXPONENT_MAX,
            vacuous: false,
            points: lx.len(),
        },
        _ => DriftBound {
            p: f64::NAN,
            constant: f64::NAN,
            pass: true,
            vacuous: true,
            points: lx.len(),
        },
    }
}

/// [`drift_exponent`] on `t >= 1` with the floor `10 dx`. `constant` is
/// reported relative to `||U0 - S||`.
pub fn drift_bound_check(series: &RunSeries, u0_distance: f64, dx: f64) -> DriftBound {
    let mut b = drift_exponent(&series.times, &series.shift_offset(), 1.0, 10.0 * dx);
    if u0_distance > 0.0 {
        b.constant /= u0_distance;
    }
    b
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct L2Verdict {
    pub pass: bool,
    /// `max_t ||U - S(. - x)|| / ||U0 - S||`.
    pub ratio: f64,
    pub bound: f64,
}

pub const L2_SLACK: f64 = 0.05;

/// `max_t ||U(t, . + x(t)) - S||` against
/// `sqrt((C2 ||U0 - S||^2 + budget) / (C1 min(1, a))) (1 + 0.05)`, where
/// `budget` is the discrete allowance on the growth of `E_a`.
pub fn l2_stability_check(
    series: &RunSeries,
    u0_distance: f64,
    c1: f64,
    c2: f64,
    a: f64,
    budget: f64,
) -> L2Verdict {
    let worst = series.l2_dist.iter().cloned().fold(0.0, f64::max);
    let weight = c1 * a.min(1.0);
    let bound = ((c2 * u0_distance * u0_distance + budget) / weight).sqrt() * (1.0 + L2_SLACK);
    let ratio = if u0_distance > 0.0 {
        worst / u0_distance
    } else if worst == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    L2Verdict {
        pass: worst <= bound,
        ratio,
        bound,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DissipationSummary {
    pub violations: usize,
    pub worst: f64,
    pub tolerance: f64,
    pub fraction: f64,
    pub pass: bool,
}

/// Fraction of steps with `D_t > tol` must stay below 0.1%.
pub fn dissipation_summary(values: &[f64], tol: f64) -> DissipationSummary {
    let violations = values.iter().filter(|d| **d > tol).count();
    let worst = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let fraction = if values.is_empty() { 0.0 } else { violations as f64 / values.len() as f64 };
    DissipationSummary {
        violations,
        worst,
        tolerance: tol,
        fraction,
        pass: fraction < 1e-3,
    }
}

/// Machine-readable verdicts of one run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdicts {
    pub contraction: ContractionVerdict,
    pub drift_bound: DriftBound,
    pub l2: L2Verdict,
    pub dissipation: DissipationSummary,
    pub sandwich_violations: usize,
}

impl Verdicts {
    pub fn pass(&self) -> bool {
        self.contraction.pass && self.drift_bound.pass && self.l2.pass && self.dissipation.pass
    }
}
