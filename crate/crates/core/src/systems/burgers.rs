use nalgebra::DMatrix;

use super::{ConservationLaw, FluxScheme, ShockFamily};
use crate::error::Result;
use crate::state::StateVector;

/// Burgers' equation with flux `u^2`, entropy `u^2/2` and entropy flux `2u^3/3`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Burgers;

impl Burgers {
    /// Exact Godunov flux of the convex scalar law.
    pub fn godunov_flux(ul: f64, ur: f64) -> f64 {
        if ul <= ur {
            if ul > 0.0 {
                ul * ul
            } else if ur < 0.0 {
                ur * ur
            } else {
                0.0
            }
        } else {
            (ul * ul).max(ur * ur)
        }
    }
}

impl ConservationLaw for Burgers {
    fn name(&self) -> String {
        "burgers".into()
    }

    fn dim(&self) -> usize {
        1
    }

    fn flux(&self, u: &StateVector) -> StateVector {
        StateVector::scalar(u[0] * u[0])
    }

    fn entropy(&self, u: &StateVector) -> f64 {
        0.5 * u[0] * u[0]
    }

    fn entropy_flux(&self, u: &StateVector) -> f64 {
        2.0 * u[0].powi(3) / 3.0
    }

    fn entropy_gradient(&self, u: &StateVector) -> Result<StateVector> {
        Ok(*u)
    }

    fn is_interior(&self, u: &StateVector) -> bool {
        u.dim() == 1 && u[0].is_finite()
    }

    fn flux_jacobian(&self, u: &StateVector) -> Result<DMatrix<f64>> {
        Ok(DMatrix::from_element(1, 1, 2.0 * u[0]))
    }

    fn extremal_eigenvalues(&self, u: &StateVector) -> Result<(f64, f64)> {
        Ok((2.0 * u[0], 2.0 * u[0]))
    }

    fn max_wave_speed(&self, u: &StateVector) -> f64 {
        2.0 * u[0].abs()
    }

    fn riemann_flux(
        &self,
        scheme: FluxScheme,
        l: &StateVector,
        r: &StateVector,
    ) -> Result<StateVector> {
        match scheme {
            FluxScheme::Godunov => Ok(StateVector::scalar(Self::godunov_flux(l[0], r[0]))),
            FluxScheme::Hll => Ok(crate::solver::fluxes::hll(self, l, r)),
            FluxScheme::Hllc => Err(crate::error::Error::Config(
                "HLLC is only defined for the full Euler system".into(),
            )),
        }
    }

    fn default_scheme(&self) -> FluxScheme {
        FluxScheme::Godunov
    }

    fn is_closed_form(&self) -> bool {
        true
    }

    fn shock_closed_form(
        &self,
        base: &StateVector,
        family: ShockFamily,
        s: f64,
    ) -> Option<(StateVector, f64)> {
        let u = base[0];
        Some(match family {
            ShockFamily::First => (StateVector::scalar(u - s), 2.0 * u - s),
            ShockFamily::Last => (StateVector::scalar(u + s), 2.0 * u + s),
        })
    }

    fn physical_names(&self) -> Vec<&'static str> {
        vec!["u"]
    }
}
