use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use super::{ConservationLaw, FluxScheme};
use crate::error::{Error, Result};
use crate::numerics::integrate;
use crate::state::StateVector;

/// Barotropic pressure law `P(rho)` together with the internal-energy
/// primitive `S` fixed by `S'' = P'(rho)/rho`.
pub trait PressureLaw: Send + Sync + fmt::Debug {
    fn pressure(&self, rho: f64) -> f64;
    fn dpressure(&self, rho: f64) -> f64;
    /// `S(rho)`.
    fn energy(&self, rho: f64) -> f64;
    /// `S'(rho)`.
    fn denergy(&self, rho: f64) -> f64;
    /// `int_0^rho c(r)/r dr`: the velocity jump across a rarefaction into vacuum.
    fn vacuum_invariant(&self, rho: f64) -> f64;
    fn describe(&self) -> String;
}

/// `P = kappa rho^gamma` with `S = kappa rho^gamma / (gamma - 1)`; for
/// `P = rho^2` this gives `S = rho^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLaw {
    pub kappa: f64,
    pub gamma: f64,
}

impl PowerLaw {
    pub fn new(kappa: f64, gamma: f64) -> Result<Self> {
        if !(kappa > 0.0 && gamma > 1.0 && kappa.is_finite() && gamma.is_finite()) {
            return Err(Error::Config(format!(
                "power law needs kappa > 0 and gamma > 1 (got kappa={kappa}, gamma={gamma})"
            )));
        }
        Ok(Self { kappa, gamma })
    }
}

impl PressureLaw for PowerLaw {
    fn pressure(&self, rho: f64) -> f64 {
        self.kappa * rho.powf(self.gamma)
    }

    fn dpressure(&self, rho: f64) -> f64 {
        self.kappa * self.gamma * rho.powf(self.gamma - 1.0)
    }

    fn energy(&self, rho: f64) -> f64 {
        self.kappa * rho.powf(self.gamma) / (self.gamma - 1.0)
    }

    fn denergy(&self, rho: f64) -> f64 {
        self.kappa * self.gamma * rho.powf(self.gamma - 1.0) / (self.gamma - 1.0)
    }

    fn vacuum_invariant(&self, rho: f64) -> f64 {
        2.0 * self.dpressure(rho).sqrt() / (self.gamma - 1.0)
    }

    fn describe(&self) -> String {
        format!("P={}*rho^{}", self.kappa, self.gamma)
    }
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// User-supplied pressure law; `S` and `S'` are obtained by quadrature with
/// `S(1) = S'(1) = 0`.
#[derive(Clone)]
pub struct GeneralPressure {
    label: String,
    p: ScalarFn,
    dp: ScalarFn,
}

impl GeneralPressure {
    pub fn new(
        label: impl Into<String>,
        p: impl Fn(f64) -> f64 + Send + Sync + 'static,
        dp: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            p: Arc::new(p),
            dp: Arc::new(dp),
        }
    }
}

impl fmt::Debug for GeneralPressure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GeneralPressure({})", self.label)
    }
}

impl PressureLaw for GeneralPressure {
    fn pressure(&self, rho: f64) -> f64 {
        (self.p)(rho)
    }

    fn dpressure(&self, rho: f64) -> f64 {
        (self.dp)(rho)
    }

    fn energy(&self, rho: f64) -> f64 {
        let dp = self.dp.clone();
        integrate(move |q| (rho - q) * dp(q) / q, 1.0, rho, 1e-13).unwrap_or(f64::NAN)
    }

    fn denergy(&self, rho: f64) -> f64 {
        let dp = self.dp.clone();
        integrate(move |q| dp(q) / q, 1.0, rho, 1e-13).unwrap_or(f64::NAN)
    }

    fn vacuum_invariant(&self, rho: f64) -> f64 {
        let dp = self.dp.clone();
        integrate(move |q| dp(q).max(0.0).sqrt() / q, 0.0, rho, 1e-12).unwrap_or(f64::NAN)
    }

    fn describe(&self) -> String {
        self.label.clone()
    }
}

/// Isentropic gas dynamics in conserved variables `(rho, rho u)` with entropy
/// `(rho u)^2/(2 rho) + S(rho)`.
#[derive(Debug, Clone)]
pub struct IsentropicEuler {
    pressure: Arc<dyn PressureLaw>,
    closed_form: bool,
}

impl IsentropicEuler {
    pub fn new(pressure: Arc<dyn PressureLaw>) -> Self {
        let closed_form = pressure.describe().starts_with("P=");
        Self {
            pressure,
            closed_form,
        }
    }

    pub fn pressure_law(&self) -> &dyn PressureLaw {
        self.pressure.as_ref()
    }

    fn sound_speed(&self, rho: f64) -> f64 {
        self.pressure.dpressure(rho).max(0.0).sqrt()
    }
}

impl ConservationLaw for IsentropicEuler {
    fn name(&self) -> String {
        format!("isentropic({})", self.pressure.describe())
    }

    fn dim(&self) -> usize {
        2
    }

    fn flux(&self, u: &StateVector) -> StateVector {
        let (rho, m) = (u[0], u[1]);
        if self.is_vacuum(u) {
            return StateVector::new(&[0.0, self.pressure.pressure(0.0)]);
        }
        StateVector::new(&[m, m * m / rho + self.pressure.pressure(rho)])
    }

    fn entropy(&self, u: &StateVector) -> f64 {
        let (rho, m) = (u[0], u[1]);
        if self.is_vacuum(u) {
            return self.pressure.energy(0.0);
        }
        0.5 * m * m / rho + self.pressure.energy(rho)
    }

    fn entropy_flux(&self, u: &StateVector) -> f64 {
        let (rho, m) = (u[0], u[1]);
        if self.is_vacuum(u) {
            return 0.0;
        }
        0.5 * m * m * m / (rho * rho) + m * self.pressure.denergy(rho)
    }

    fn entropy_gradient(&self, u: &StateVector) -> Result<StateVector> {
        if self.is_vacuum(u) {
            return Err(Error::VacuumGradient);
        }
        let (rho, m) = (u[0], u[1]);
        let vel = m / rho;
        Ok(StateVector::new(&[
            -0.5 * vel * vel + self.pressure.denergy(rho),
            vel,
        ]))
    }

    fn is_interior(&self, u: &StateVector) -> bool {
        u.dim() == 2 && u[0] > 0.0 && u.is_finite()
    }

    fn is_vacuum(&self, u: &StateVector) -> bool {
        u.dim() == 2 && u[0] == 0.0 && u[1] == 0.0
    }

    fn flux_jacobian(&self, u: &StateVector) -> Result<DMatrix<f64>> {
        if self.is_vacuum(u) {
            return Err(Error::UndefinedEigenvalue);
        }
        let vel = u[1] / u[0];
        Ok(DMatrix::from_row_slice(
            2,
            2,
            &[0.0, 1.0, -vel * vel + self.pressure.dpressure(u[0]), 2.0 * vel],
        ))
    }

    fn extremal_eigenvalues(&self, u: &StateVector) -> Result<(f64, f64)> {
        if self.is_vacuum(u) {
            return Err(Error::UndefinedEigenvalue);
        }
        let vel = u[1] / u[0];
        let c = self.sound_speed(u[0]);
        Ok((vel - c, vel + c))
    }

    fn max_wave_speed(&self, u: &StateVector) -> f64 {
        if u[0] <= 0.0 {
            return 0.0;
        }
        (u[1] / u[0]).abs() + self.sound_speed(u[0])
    }

    fn wave_speed_bounds(&self, l: &StateVector, r: &StateVector) -> (f64, f64) {
        let lv = l[0] > 0.0;
        let rv = r[0] > 0.0;
        match (lv, rv) {
            (true, true) => {
                let (ul, ur) = (l[1] / l[0], r[1] / r[0]);
                let (cl, cr) = (self.sound_speed(l[0]), self.sound_speed(r[0]));
                ((ul - cl).min(ur - cr), (ul + cl).max(ur + cr))
            }
            (false, true) => {
                let ur = r[1] / r[0];
                (
                    ur - self.pressure.vacuum_invariant(r[0]),
                    ur + self.sound_speed(r[0]),
                )
            }
            (true, false) => {
                let ul = l[1] / l[0];
                (
                    ul - self.sound_speed(l[0]),
                    ul + self.pressure.vacuum_invariant(l[0]),
                )
            }
            (false, false) => (0.0, 0.0),
        }
    }

    fn riemann_flux(
        &self,
        scheme: FluxScheme,
        l: &StateVector,
        r: &StateVector,
    ) -> Result<StateVector> {
        match scheme {
            FluxScheme::Hll => Ok(crate::solver::fluxes::hll(self, l, r)),
            other => Err(Error::Config(format!(
                "flux scheme {other:?} is not available for isentropic Euler"
            ))),
        }
    }

    fn is_closed_form(&self) -> bool {
        self.closed_form
    }

    fn physical_names(&self) -> Vec<&'static str> {
        vec!["rho", "u"]
    }

    fn from_physical(&self, p: &[f64]) -> StateVector {
        StateVector::new(&[p[0], p[0] * p[1]])
    }

    fn to_physical(&self, u: &StateVector) -> Vec<f64> {
        if u[0] > 0.0 {
            vec![u[0], u[1] / u[0]]
        } else {
            vec![0.0, 0.0]
        }
    }
}
