//! Relative entropy `eta(U|V)`, relative entropy flux `F(U, V)` and the
//! two-piece weighted functional `E_a`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSnapshot;
use crate::state::StateVector;
use crate::systems::{ConservationLaw, DomainBox};

/// A reference state `V` with `eta(V)`, `grad eta(V)`, `G(V)` and `A(V)`
/// cached for repeated evaluation of `eta(.|V)` and `F(., V)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reference {
    pub state: StateVector,
    eta: f64,
    grad: StateVector,
    g: f64,
    flux: StateVector,
}

impl Reference {
    pub fn new(law: &dyn ConservationLaw, v: &StateVector) -> Result<Self> {
        if !law.is_admissible(v) {
            return Err(Error::InvalidState(format!(
                "reference state {v:?} is outside the domain of {}",
                law.name()
            )));
        }
        let grad = law.entropy_gradient(v)?;
        Ok(Self {
            state: *v,
            eta: law.entropy(v),
            grad,
            g: law.entropy_flux(v),
            flux: law.flux(v),
        })
    }

    /// `eta(U|V)`; round-off below zero is clamped.
    pub fn rel_entropy(&self, law: &dyn ConservationLaw, u: &StateVector) -> f64 {
        let r = law.entropy(u) - self.eta - self.grad.dot(&(*u - self.state));
        if r < 0.0 && r > -1e-12 * (1.0 + self.eta.abs()) {
            0.0
        } else {
            r
        }
    }

    /// `F(U, V)`.
    pub fn rel_flux(&self, law: &dyn ConservationLaw, u: &StateVector) -> f64 {
        if *u == self.state {
            return 0.0;
        }
        law.entropy_flux(u) - self.g - self.grad.dot(&(law.flux(u) - self.flux))
    }
}

fn check_state(law: &dyn ConservationLaw, u: &StateVector) -> Result<()> {
    u.check_finite()?;
    if !law.is_admissible(u) {
        return Err(Error::InvalidState(format!(
            "state {u:?} is outside the domain of {}",
            law.name()
        )));
    }
    Ok(())
}

/// `eta(U|V) = eta(U) - eta(V) - grad eta(V) . (U - V)`.
pub fn rel_entropy(law: &dyn ConservationLaw, u: &StateVector, v: &StateVector) -> Result<f64> {
    check_state(law, u)?;
    Ok(Reference::new(law, v)?.rel_entropy(law, u))
}

/// `F(U, V) = G(U) - G(V) - grad eta(V) . (A(U) - A(V))`.
pub fn rel_flux(law: &dyn ConservationLaw, u: &StateVector, v: &StateVector) -> Result<f64> {
    check_state(law, u)?;
    Ok(Reference::new(law, v)?.rel_flux(law, u))
}

/// Sampled constants `C1 <= eta(U|V)/|U-V|^2 <= C2` over `U` in the box and
/// `V` in `omega`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Comparability {
    pub c1: f64,
    pub c2: f64,
    pub samples: usize,
}

const NEAR_DIAGONAL: f64 = 0.05;

pub fn comparability_constants(
    law: &dyn ConservationLaw,
    omega: &[StateVector],
    domain: &DomainBox,
    n_samples: usize,
    seed: u64,
) -> Result<Comparability> {
    if omega.is_empty() {
        return Err(Error::Config("comparability needs a nonempty reference set".into()));
    }
    if domain.dim() != law.dim() {
        return Err(Error::Config(format!(
            "domain box has {} bounds, system has dimension {}",
            domain.dim(),
            law.dim()
        )));
    }
    let refs = omega
        .iter()
        .map(|v| {
            if !law.is_interior(v) {
                return Err(Error::Config(format!("reference {v:?} is not interior")));
            }
            Reference::new(law, v)
        })
        .collect::<Result<Vec<_>>>()?;
    let us = domain.sample(law, n_samples, seed);
    let (mut c1, mut c2) = (f64::INFINITY, 0.0f64);
    let mut used = 0;
    for (k, u) in us.iter().enumerate() {
        let r = &refs[k % refs.len()];
        let d2 = (*u - r.state).norm_sq();
        // the quotient is cancellation-dominated near the diagonal
        if d2 < NEAR_DIAGONAL * NEAR_DIAGONAL * (1.0 + r.state.norm_sq()) {
            continue;
        }
        let q = r.rel_entropy(law, u) / d2;
        c1 = c1.min(q);
        c2 = c2.max(q);
        used += 1;
    }
    if used == 0 {
        return Err(Error::Config("no usable comparability samples".into()));
    }
    Ok(Comparability {
        c1,
        c2,
        samples: used,
    })
}

/// Left and right references with the weight `a` and split position `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PseudoNormConfig {
    pub u_l: StateVector,
    pub u_r: StateVector,
    pub a: f64,
    pub x: f64,
}

/// Midpoint sum of `f_left` on `(x_min, x)` and `f_right` on `(x, x_max)`,
/// with the cell containing `x` split at its exact sub-cell lengths.
pub fn split_integral(
    field: &FieldSnapshot,
    x: f64,
    f_left: impl Fn(&StateVector) -> f64,
    f_right: impl Fn(&StateVector) -> f64,
) -> Result<f64> {
    let g = &field.grid;
    let k = g.cell_index(x).ok_or_else(|| {
        Error::OutOfRange(format!("split {x} outside [{}, {}]", g.x_min, g.x_max))
    })?;
    let dx = g.dx();
    let mut left = 0.0;
    for c in &field.cells[..k] {
        left += f_left(c);
    }
    let mut right = 0.0;
    for c in &field.cells[k + 1..] {
        right += f_right(c);
    }
    let c = &field.cells[k];
    let lfrac = (x - g.edge(k)).clamp(0.0, dx);
    Ok(left * dx + right * dx + lfrac * f_left(c) + (dx - lfrac) * f_right(c))
}

/// `E_a = int_{-inf}^x eta(U|U_L) + a int_x^inf eta(U|U_R)` over the grid.
pub fn pseudo_norm(
    law: &dyn ConservationLaw,
    field: &FieldSnapshot,
    cfg: &PseudoNormConfig,
) -> Result<f64> {
    if !(cfg.a > 0.0) {
        return Err(Error::Config(format!("weight a = {} must be positive", cfg.a)));
    }
    let rl = Reference::new(law, &cfg.u_l)?;
    let rr = Reference::new(law, &cfg.u_r)?;
    pseudo_norm_with(law, field, &rl, &rr, cfg.a, cfg.x)
}

/// [`pseudo_norm`] with precomputed references.
pub fn pseudo_norm_with(
    law: &dyn ConservationLaw,
    field: &FieldSnapshot,
    left: &Reference,
    right: &Reference,
    a: f64,
    x: f64,
) -> Result<f64> {
    split_integral(
        field,
        x,
        |u| left.rel_entropy(law, u),
        |u| a * right.rel_entropy(law, u),
    )
}

/// `|| U - S(. - x) ||_{L^2}` over the grid, `S` the step `(U_L, U_R)`.
pub fn l2_distance_to_step(
    field: &FieldSnapshot,
    x: f64,
    u_l: &StateVector,
    u_r: &StateVector,
) -> Result<f64> {
    Ok(split_integral(
        field,
        x,
        |u| (*u - *u_l).norm_sq(),
        |u| (*u - *u_r).norm_sq(),
    )?
    .sqrt())
}
