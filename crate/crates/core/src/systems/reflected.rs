use nalgebra::DMatrix;

use super::{ConservationLaw, FluxScheme, ShockFamily};
use crate::error::Result;
use crate::state::StateVector;

/// The system `U_t - A(U)_x = 0` solved by `U(t, -x)`. Its 1-shocks are the
/// n-shocks of the wrapped system with negated speed.
#[derive(Debug, Clone)]
pub struct Reflected<L>(pub L);

impl<L: ConservationLaw> ConservationLaw for Reflected<L> {
    fn name(&self) -> String {
        format!("reflected({})", self.0.name())
    }

    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn flux(&self, u: &StateVector) -> StateVector {
        -self.0.flux(u)
    }

    fn entropy(&self, u: &StateVector) -> f64 {
        self.0.entropy(u)
    }

    fn entropy_flux(&self, u: &StateVector) -> f64 {
        -self.0.entropy_flux(u)
    }

    fn entropy_gradient(&self, u: &StateVector) -> Result<StateVector> {
        self.0.entropy_gradient(u)
    }

    fn is_interior(&self, u: &StateVector) -> bool {
        self.0.is_interior(u)
    }

    fn is_vacuum(&self, u: &StateVector) -> bool {
        self.0.is_vacuum(u)
    }

    fn flux_jacobian(&self, u: &StateVector) -> Result<DMatrix<f64>> {
        Ok(-self.0.flux_jacobian(u)?)
    }

    fn extremal_eigenvalues(&self, u: &StateVector) -> Result<(f64, f64)> {
        let (lo, hi) = self.0.extremal_eigenvalues(u)?;
        Ok((-hi, -lo))
    }

    fn max_wave_speed(&self, u: &StateVector) -> f64 {
        self.0.max_wave_speed(u)
    }

    fn wave_speed_bounds(&self, l: &StateVector, r: &StateVector) -> (f64, f64) {
        let (lo, hi) = self.0.wave_speed_bounds(r, l);
        (-hi, -lo)
    }

    fn riemann_flux(
        &self,
        scheme: FluxScheme,
        l: &StateVector,
        r: &StateVector,
    ) -> Result<StateVector> {
        Ok(-self.0.riemann_flux(scheme, r, l)?)
    }

    fn default_scheme(&self) -> FluxScheme {
        self.0.default_scheme()
    }

    fn is_closed_form(&self) -> bool {
        self.0.is_closed_form()
    }

    fn shock_closed_form(
        &self,
        base: &StateVector,
        family: ShockFamily,
        s: f64,
    ) -> Option<(StateVector, f64)> {
        self.0
            .shock_closed_form(base, family.flip(), s)
            .map(|(state, sigma)| (state, -sigma))
    }

    fn physical_names(&self) -> Vec<&'static str> {
        self.0.physical_names()
    }

    fn from_physical(&self, p: &[f64]) -> StateVector {
        self.0.from_physical(p)
    }

    fn to_physical(&self, u: &StateVector) -> Vec<f64> {
        self.0.to_physical(u)
    }
}
