use nalgebra::DMatrix;

use super::{ConservationLaw, FluxScheme};
use crate::error::{Error, Result};
use crate::state::StateVector;

/// Full Euler equations for a polytropic gas, `P = (gamma - 1) rho e`, with the
/// entropy pair `eta = (gamma-1) rho ln rho - rho ln e`, `G = u eta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullEuler {
    pub gamma: f64,
}

/// Primitive view of a non-vacuum state.
#[derive(Debug, Clone, Copy)]
pub struct Primitive {
    pub rho: f64,
    pub u: f64,
    pub e: f64,
    pub p: f64,
}

impl FullEuler {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0 && gamma.is_finite()) {
            return Err(Error::Config(format!("gamma must exceed 1 (got {gamma})")));
        }
        Ok(Self { gamma })
    }

    pub fn primitive(&self, s: &StateVector) -> Primitive {
        let rho = s[0];
        if rho <= 0.0 {
            return Primitive {
                rho: 0.0,
                u: 0.0,
                e: 0.0,
                p: 0.0,
            };
        }
        let u = s[1] / rho;
        let e = s[2] / rho - 0.5 * u * u;
        Primitive {
            rho,
            u,
            e,
            p: (self.gamma - 1.0) * rho * e,
        }
    }

    pub fn sound_speed(&self, prim: &Primitive) -> f64 {
        if prim.rho <= 0.0 {
            0.0
        } else {
            (self.gamma * prim.p.max(0.0) / prim.rho).sqrt()
        }
    }
}

impl ConservationLaw for FullEuler {
    fn name(&self) -> String {
        format!("euler(gamma={})", self.gamma)
    }

    fn dim(&self) -> usize {
        3
    }

    fn flux(&self, s: &StateVector) -> StateVector {
        if self.is_vacuum(s) {
            return StateVector::zeros(3);
        }
        let w = self.primitive(s);
        StateVector::new(&[s[1], s[1] * w.u + w.p, w.u * (s[2] + w.p)])
    }

    fn entropy(&self, s: &StateVector) -> f64 {
        if self.is_vacuum(s) {
            return 0.0;
        }
        let w = self.primitive(s);
        (self.gamma - 1.0) * w.rho * w.rho.ln() - w.rho * w.e.ln()
    }

    fn entropy_flux(&self, s: &StateVector) -> f64 {
        if self.is_vacuum(s) {
            return 0.0;
        }
        self.primitive(s).u * self.entropy(s)
    }

    fn entropy_gradient(&self, s: &StateVector) -> Result<StateVector> {
        if self.is_vacuum(s) {
            return Err(Error::VacuumGradient);
        }
        let w = self.primitive(s);
        let g = self.gamma;
        Ok(StateVector::new(&[
            g + (g - 1.0) * w.rho.ln() - w.e.ln() - 0.5 * w.u * w.u / w.e,
            w.u / w.e,
            -1.0 / w.e,
        ]))
    }

    fn is_interior(&self, s: &StateVector) -> bool {
        if s.dim() != 3 || !s.is_finite() || s[0] <= 0.0 {
            return false;
        }
        self.primitive(s).e > 0.0
    }

    fn is_vacuum(&self, s: &StateVector) -> bool {
        s.dim() == 3 && s[0] == 0.0 && s[1] == 0.0 && s[2] == 0.0
    }

    fn flux_jacobian(&self, s: &StateVector) -> Result<DMatrix<f64>> {
        if self.is_vacuum(s) {
            return Err(Error::UndefinedEigenvalue);
        }
        let w = self.primitive(s);
        let g = self.gamma;
        let u = w.u;
        let h = (s[2] + w.p) / w.rho;
        Ok(DMatrix::from_row_slice(
            3,
            3,
            &[
                0.0,
                1.0,
                0.0,
                0.5 * (g - 3.0) * u * u,
                (3.0 - g) * u,
                g - 1.0,
                u * (0.5 * (g - 1.0) * u * u - h),
                h - (g - 1.0) * u * u,
                g * u,
            ],
        ))
    }

    fn extremal_eigenvalues(&self, s: &StateVector) -> Result<(f64, f64)> {
        if self.is_vacuum(s) {
            return Err(Error::UndefinedEigenvalue);
        }
        let w = self.primitive(s);
        let c = self.sound_speed(&w);
        Ok((w.u - c, w.u + c))
    }

    fn max_wave_speed(&self, s: &StateVector) -> f64 {
        let w = self.primitive(s);
        w.u.abs() + self.sound_speed(&w)
    }

    fn wave_speed_bounds(&self, l: &StateVector, r: &StateVector) -> (f64, f64) {
        let (wl, wr) = (self.primitive(l), self.primitive(r));
        let (cl, cr) = (self.sound_speed(&wl), self.sound_speed(&wr));
        let front = 2.0 / (self.gamma - 1.0);
        match (wl.rho > 0.0, wr.rho > 0.0) {
            (true, true) => ((wl.u - cl).min(wr.u - cr), (wl.u + cl).max(wr.u + cr)),
            (false, true) => (wr.u - front * cr, wr.u + cr),
            (true, false) => (wl.u - cl, wl.u + front * cl),
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
            FluxScheme::Hllc => Ok(crate::solver::fluxes::hllc(self, l, r)),
            FluxScheme::Hll => Ok(crate::solver::fluxes::hll(self, l, r)),
            FluxScheme::Godunov => Err(Error::Config(
                "the exact Godunov flux is only available for Burgers".into(),
            )),
        }
    }

    fn default_scheme(&self) -> FluxScheme {
        FluxScheme::Hllc
    }

    fn is_closed_form(&self) -> bool {
        true
    }

    fn physical_names(&self) -> Vec<&'static str> {
        vec!["rho", "u", "e"]
    }

    fn from_physical(&self, p: &[f64]) -> StateVector {
        let (rho, u, e) = (p[0], p[1], p[2]);
        if rho <= 0.0 {
            return StateVector::zeros(3);
        }
        StateVector::new(&[rho, rho * u, rho * (e + 0.5 * u * u)])
    }

    fn to_physical(&self, s: &StateVector) -> Vec<f64> {
        let w = self.primitive(s);
        vec![w.rho, w.u, w.e]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradient_matches_finite_differences() {
        let eu = FullEuler::new(1.4).unwrap();
        let s = eu.from_physical(&[0.8, 0.6, 1.3]);
        let g = eu.entropy_gradient(&s).unwrap();
        for j in 0..3 {
            let (mut up, mut dn) = (s, s);
            up[j] += 1e-6;
            dn[j] -= 1e-6;
            let fd = (eu.entropy(&up) - eu.entropy(&dn)) / 2e-6;
            assert!((fd - g[j]).abs() < 1e-8, "component {j}: {fd} vs {}", g[j]);
        }
        let unit = eu.entropy_gradient(&StateVector::new(&[1.0, 0.0, 1.0])).unwrap();
        assert_eq!(unit.as_slice(), &[1.4, 0.0, -1.0]);
    }

    #[test]
    fn physical_round_trip_and_domain() {
        let eu = FullEuler::new(1.4).unwrap();
        let p = [1.2, -0.4, 0.9];
        let back = eu.to_physical(&eu.from_physical(&p));
        for k in 0..3 {
            assert!((back[k] - p[k]).abs() < 1e-14);
        }
        assert!(!eu.is_admissible(&StateVector::new(&[1.0, 2.0, 1.0])));
        assert!(eu.is_admissible(&StateVector::zeros(3)));
        assert!(!eu.is_admissible(&StateVector::new(&[0.0, 0.0, 1.0])));
    }

    #[test]
    fn entropy_vanishes_continuously_at_vacuum() {
        let eu = FullEuler::new(1.4).unwrap();
        let near = eu.from_physical(&[1e-9, 0.5, 1.0]);
        assert!(eu.entropy(&near).abs() < 1e-7);
        assert!(eu.entropy_flux(&near).abs() < 1e-7);
        assert!(eu.flux(&near).max_abs() < 1e-8);
    }
}
