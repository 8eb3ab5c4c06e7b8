//! Conservation-law systems `U_t + A(U)_x = 0` with a convex entropy pair.
//!
//! The [`ConservationLaw`] trait is the descriptor consumed by every other
//! module. Built-ins are [`Burgers`] (flux `u^2`, quadratic entropy),
//! [`IsentropicEuler`] with a pluggable [`PressureLaw`], and [`FullEuler`]
//! for a polytropic gas. [`Reflected`] realises the `x -> -x` duality that
//! exchanges 1-shocks and n-shocks.
//!
//! Trait methods assume their argument lies in the extended domain and do no
//! validation; the free functions in this module ([`flux`],
//! [`entropy_quantities`], [`extremal_eigenvalues`]) are the checked entry
//! points.

mod burgers;
mod domain;
mod euler;
mod isentropic;
mod reflected;

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::FD_STEP;
use crate::state::StateVector;

pub use burgers::Burgers;
pub use domain::DomainBox;
pub use euler::{FullEuler, Primitive};
pub use isentropic::{GeneralPressure, IsentropicEuler, PowerLaw, PressureLaw};
pub use reflected::Reflected;

/// Extremal wave family a shock belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShockFamily {
    /// Slowest family, speed decreasing along the curve.
    #[serde(rename = "1")]
    First,
    /// Fastest family, speed increasing along the curve.
    #[serde(rename = "n")]
    Last,
}

impl ShockFamily {
    pub fn flip(self) -> Self {
        match self {
            ShockFamily::First => ShockFamily::Last,
            ShockFamily::Last => ShockFamily::First,
        }
    }

    /// `-1` for the 1-family (speed must decrease), `+1` for the n-family.
    pub fn speed_sign(self) -> f64 {
        match self {
            ShockFamily::First => -1.0,
            ShockFamily::Last => 1.0,
        }
    }
}

/// Numerical flux used at cell interfaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FluxScheme {
    /// Exact Godunov flux of a convex scalar law.
    Godunov,
    Hll,
    Hllc,
}

pub trait ConservationLaw: Send + Sync {
    fn name(&self) -> String;

    fn dim(&self) -> usize;

    /// Flux `A(U)`, extended by continuity to vacuum.
    fn flux(&self, u: &StateVector) -> StateVector;

    /// Entropy `eta(U)`, extended by continuity to vacuum.
    fn entropy(&self, u: &StateVector) -> f64;

    /// Entropy flux `G(U)`, extended by continuity to vacuum.
    fn entropy_flux(&self, u: &StateVector) -> f64;

    /// Gradient of the entropy in conserved variables. Refuses vacuum.
    fn entropy_gradient(&self, u: &StateVector) -> Result<StateVector>;

    fn is_interior(&self, u: &StateVector) -> bool;

    fn is_vacuum(&self, _u: &StateVector) -> bool {
        false
    }

    fn is_admissible(&self, u: &StateVector) -> bool {
        u.dim() == self.dim() && u.is_finite() && (self.is_interior(u) || self.is_vacuum(u))
    }

    /// `grad A(U)`; central differences unless a closed form is provided.
    fn flux_jacobian(&self, u: &StateVector) -> Result<DMatrix<f64>> {
        if self.is_vacuum(u) {
            return Err(Error::UndefinedEigenvalue);
        }
        let m = self.dim();
        let mut jac = DMatrix::zeros(m, m);
        for j in 0..m {
            let mut up = *u;
            let mut dn = *u;
            up[j] += FD_STEP;
            dn[j] -= FD_STEP;
            let d = (self.flux(&up) - self.flux(&dn)) * (1.0 / (up[j] - dn[j]));
            for i in 0..m {
                jac[(i, j)] = d[i];
            }
        }
        Ok(jac)
    }

    /// Smallest and largest eigenvalue of `grad A(U)`.
    fn extremal_eigenvalues(&self, u: &StateVector) -> Result<(f64, f64)> {
        let jac = self.flux_jacobian(u)?;
        numeric_extremal_eigenvalues(&jac)
    }

    /// Largest characteristic speed magnitude; zero at vacuum.
    fn max_wave_speed(&self, u: &StateVector) -> f64 {
        match self.extremal_eigenvalues(u) {
            Ok((lo, hi)) => lo.abs().max(hi.abs()),
            Err(_) => 0.0,
        }
    }

    /// Lower and upper signal-speed estimates for the Riemann problem `(l, r)`.
    fn wave_speed_bounds(&self, l: &StateVector, r: &StateVector) -> (f64, f64) {
        match (self.extremal_eigenvalues(l), self.extremal_eigenvalues(r)) {
            (Ok((a, b)), Ok((c, d))) => (a.min(c), b.max(d)),
            (Ok((a, b)), Err(_)) | (Err(_), Ok((a, b))) => (a.min(-b.abs()), b.max(a.abs())),
            (Err(_), Err(_)) => (0.0, 0.0),
        }
    }

    /// Interface flux for the given scheme.
    fn riemann_flux(
        &self,
        scheme: FluxScheme,
        l: &StateVector,
        r: &StateVector,
    ) -> Result<StateVector> {
        match scheme {
            FluxScheme::Hll => Ok(crate::solver::fluxes::hll(self, l, r)),
            other => Err(Error::Config(format!(
                "flux scheme {other:?} is not available for system {}",
                self.name()
            ))),
        }
    }

    fn default_scheme(&self) -> FluxScheme {
        FluxScheme::Hll
    }

    /// True when flux, entropy and entropy flux are closed-form expressions
    /// (tightens the compatibility threshold).
    fn is_closed_form(&self) -> bool {
        false
    }

    /// Closed-form shock curve `(S_U(s), sigma_U(s))`, when one exists.
    fn shock_closed_form(
        &self,
        _base: &StateVector,
        _family: ShockFamily,
        _s: f64,
    ) -> Option<(StateVector, f64)> {
        None
    }

    /// Names of the physical variables used by [`DomainBox`].
    fn physical_names(&self) -> Vec<&'static str> {
        vec!["u0", "u1", "u2"][..self.dim()].to_vec()
    }

    fn from_physical(&self, p: &[f64]) -> StateVector {
        StateVector::new(p)
    }

    fn to_physical(&self, u: &StateVector) -> Vec<f64> {
        u.to_vec()
    }
}

impl fmt::Debug for dyn ConservationLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConservationLaw({})", self.name())
    }
}

/// Extremal real parts of the eigenvalues of a square matrix.
pub fn numeric_extremal_eigenvalues(jac: &DMatrix<f64>) -> Result<(f64, f64)> {
    if jac.nrows() == 1 {
        return Ok((jac[(0, 0)], jac[(0, 0)]));
    }
    let eig = jac.clone().complex_eigenvalues();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for z in eig.iter() {
        lo = lo.min(z.re);
        hi = hi.max(z.re);
    }
    if lo.is_finite() && hi.is_finite() {
        Ok((lo, hi))
    } else {
        Err(Error::InvalidState("eigen-decomposition failed".into()))
    }
}

fn check_admissible(law: &dyn ConservationLaw, u: &StateVector) -> Result<()> {
    if u.dim() != law.dim() {
        return Err(Error::InvalidState(format!(
            "state {u:?} has dimension {} but {} needs {}",
            u.dim(),
            law.name(),
            law.dim()
        )));
    }
    u.check_finite()?;
    if !law.is_admissible(u) {
        return Err(Error::InvalidState(format!(
            "state {u:?} is outside the domain of {}",
            law.name()
        )));
    }
    Ok(())
}

/// Checked flux evaluation.
pub fn flux(law: &dyn ConservationLaw, u: &StateVector) -> Result<StateVector> {
    check_admissible(law, u)?;
    Ok(law.flux(u))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyQuantities {
    pub eta: f64,
    pub grad: StateVector,
    pub flux: f64,
}

/// Entropy, its gradient and the entropy flux at an interior state.
pub fn entropy_quantities(law: &dyn ConservationLaw, u: &StateVector) -> Result<EntropyQuantities> {
    check_admissible(law, u)?;
    let grad = law.entropy_gradient(u)?;
    Ok(EntropyQuantities {
        eta: law.entropy(u),
        grad,
        flux: law.entropy_flux(u),
    })
}

/// Checked `(lambda_-, lambda_+)`.
pub fn extremal_eigenvalues(law: &dyn ConservationLaw, u: &StateVector) -> Result<(f64, f64)> {
    check_admissible(law, u)?;
    if law.is_vacuum(u) {
        return Err(Error::UndefinedEigenvalue);
    }
    law.extremal_eigenvalues(u)
}

#[derive(Debug, Clone, Serialize)]
pub struct CompatibilityReport {
    pub max_residual: f64,
    pub threshold: f64,
    pub samples: usize,
    pub pass: bool,
}

/// Max over samples and components of `|d_j G - sum_i d_i eta d_j A_i|`,
/// every derivative of `G` and `A` taken by central differences.
pub fn compatibility_check(
    law: &dyn ConservationLaw,
    samples: &[StateVector],
) -> Result<CompatibilityReport> {
    if samples.is_empty() {
        return Err(Error::Config("compatibility check needs samples".into()));
    }
    let m = law.dim();
    let mut worst: f64 = 0.0;
    for u in samples {
        check_admissible(law, u)?;
        if !law.is_interior(u) {
            return Err(Error::Config(format!("sample {u:?} is not interior")));
        }
        let grad = law.entropy_gradient(u)?;
        for j in 0..m {
            // fourth-order central differences; low-energy states have large
            // higher derivatives
            let h = 1e-5 * (1.0 + u[j].abs());
            let shifted = |k: f64| {
                let mut w = *u;
                w[j] += k * h;
                w
            };
            let (p1, m1, p2, m2) = (shifted(1.0), shifted(-1.0), shifted(2.0), shifted(-2.0));
            let dg = (8.0 * (law.entropy_flux(&p1) - law.entropy_flux(&m1))
                - (law.entropy_flux(&p2) - law.entropy_flux(&m2)))
                / (12.0 * h);
            let da = ((law.flux(&p1) - law.flux(&m1)) * 8.0 - (law.flux(&p2) - law.flux(&m2)))
                * (1.0 / (12.0 * h));
            let res = (dg - grad.dot(&da)).abs();
            worst = worst.max(if res.is_nan() { f64::INFINITY } else { res });
        }
    }
    let threshold = if law.is_closed_form() { 1e-7 } else { 1e-5 };
    Ok(CompatibilityReport {
        max_residual: worst,
        threshold,
        samples: samples.len(),
        pass: worst < threshold,
    })
}

/// Smallest eigenvalue of the finite-difference entropy Hessian at `u`.
pub fn entropy_hessian_min_eigenvalue(law: &dyn ConservationLaw, u: &StateVector) -> Result<f64> {
    let m = law.dim();
    let mut hess = DMatrix::zeros(m, m);
    for j in 0..m {
        let mut up = *u;
        let mut dn = *u;
        up[j] += FD_STEP;
        dn[j] -= FD_STEP;
        let d = (law.entropy_gradient(&up)? - law.entropy_gradient(&dn)?) * (1.0 / (up[j] - dn[j]));
        for i in 0..m {
            hess[(i, j)] = d[i];
        }
    }
    let sym = (&hess + hess.transpose()) * 0.5;
    Ok(sym.symmetric_eigenvalues().min())
}

/// Configuration-level selection of a built-in system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase", deny_unknown_fields)]
pub enum SystemSpec {
    Burgers {},
    Isentropic {
        #[serde(default)]
        pressure: PressureSpec,
    },
    Euler {
        #[serde(default = "default_gamma")]
        gamma: f64,
    },
}

fn default_gamma() -> f64 {
    1.4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "lowercase", deny_unknown_fields)]
pub enum PressureSpec {
    /// `P = kappa rho^gamma`.
    Power {
        gamma: f64,
        #[serde(default = "one")]
        kappa: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl Default for PressureSpec {
    fn default() -> Self {
        PressureSpec::Power {
            gamma: 2.0,
            kappa: 1.0,
        }
    }
}

impl SystemSpec {
    pub fn parse_name(name: &str, gamma: Option<f64>) -> Result<Self> {
        match name {
            "burgers" => Ok(SystemSpec::Burgers {}),
            "isentropic" => Ok(SystemSpec::Isentropic {
                pressure: PressureSpec::Power {
                    gamma: gamma.unwrap_or(2.0),
                    kappa: 1.0,
                },
            }),
            "euler" => Ok(SystemSpec::Euler {
                gamma: gamma.unwrap_or(1.4),
            }),
            other => Err(Error::Config(format!(
                "unknown system '{other}' (expected burgers | isentropic | euler)"
            ))),
        }
    }

    pub fn build(&self) -> Result<Arc<dyn ConservationLaw>> {
        Ok(match self {
            SystemSpec::Burgers {} => Arc::new(Burgers),
            SystemSpec::Isentropic {
                pressure: PressureSpec::Power { gamma, kappa },
            } => Arc::new(IsentropicEuler::new(Arc::new(PowerLaw::new(*kappa, *gamma)?))),
            SystemSpec::Euler { gamma } => Arc::new(FullEuler::new(*gamma)?),
        })
    }
}
