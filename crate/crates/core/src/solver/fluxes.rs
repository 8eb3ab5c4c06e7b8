//! Interface fluxes. All are consistent: `flux(U, U) = A(U)`.

use crate::state::StateVector;
use crate::systems::{ConservationLaw, FullEuler, Primitive};

/// Harten–Lax–van Leer flux with the system's signal-speed estimates.
pub fn hll<L: ConservationLaw + ?Sized>(law: &L, l: &StateVector, r: &StateVector) -> StateVector {
    if l == r {
        return law.flux(l);
    }
    let (sl, sr) = law.wave_speed_bounds(l, r);
    if sl >= 0.0 {
        return law.flux(l);
    }
    if sr <= 0.0 {
        return law.flux(r);
    }
    let (fl, fr) = (law.flux(l), law.flux(r));
    (fl * sr - fr * sl + (*r - *l) * (sl * sr)) * (1.0 / (sr - sl))
}

/// HLLC flux for the full Euler system (contact-restoring). Falls back to HLL
/// when either side is vacuum or the star speed is degenerate.
pub fn hllc(law: &FullEuler, l: &StateVector, r: &StateVector) -> StateVector {
    if l == r {
        return law.flux(l);
    }
    let (wl, wr) = (law.primitive(l), law.primitive(r));
    if wl.rho <= 0.0 || wr.rho <= 0.0 {
        return hll(law, l, r);
    }
    let (sl, sr) = law.wave_speed_bounds(l, r);
    if sl >= 0.0 {
        return law.flux(l);
    }
    if sr <= 0.0 {
        return law.flux(r);
    }
    let ml = wl.rho * (sl - wl.u);
    let mr = wr.rho * (sr - wr.u);
    let den = ml - mr;
    if den.abs() < 1e-300 {
        return hll(law, l, r);
    }
    let s_star = (wr.p - wl.p + wl.u * ml - wr.u * mr) / den;
    if !(s_star > sl && s_star < sr) {
        return hll(law, l, r);
    }
    let star = |s: &StateVector, w: &Primitive, sk: f64| {
        let coef = w.rho * (sk - w.u) / (sk - s_star);
        StateVector::new(&[
            coef,
            coef * s_star,
            coef * (s[2] / w.rho + (s_star - w.u) * (s_star + w.p / (w.rho * (sk - w.u)))),
        ])
    };
    if s_star >= 0.0 {
        law.flux(l) + (star(l, &wl, sl) - *l) * sl
    } else {
        law.flux(r) + (star(r, &wr, sr) - *r) * sr
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{Burgers, IsentropicEuler, PowerLaw};
    use std::sync::Arc;

    #[test]
    fn consistency() {
        let eu = FullEuler::new(1.4).unwrap();
        let u = eu.from_physical(&[0.7, 0.3, 1.1]);
        let f = eu.flux(&u);
        assert_eq!(hllc(&eu, &u, &u), f);
        assert_eq!(hll(&eu, &u, &u), f);
        let iso = IsentropicEuler::new(Arc::new(PowerLaw::new(1.0, 2.0).unwrap()));
        let v = StateVector::new(&[1.2, -0.4]);
        assert_eq!(hll(&iso, &v, &v), iso.flux(&v));
        assert_eq!(hll(&Burgers, &StateVector::scalar(0.4), &StateVector::scalar(0.4))[0], 0.4 * 0.4);
    }

    #[test]
    fn hllc_resolves_stationary_contact_exactly() {
        let eu = FullEuler::new(1.4).unwrap();
        // equal pressure and zero velocity, different densities
        let l = eu.from_physical(&[1.0, 0.0, 2.5]);
        let r = eu.from_physical(&[0.125, 0.0, 20.0]);
        let f = hllc(&eu, &l, &r);
        assert!(f[0].abs() < 1e-14 && (f[1] - 1.0).abs() < 1e-14 && f[2].abs() < 1e-14);
        // HLL smears it
        assert!(hll(&eu, &l, &r)[0].abs() > 1e-3);
    }

    #[test]
    fn vacuum_sides_are_finite() {
        let eu = FullEuler::new(1.4).unwrap();
        let l = eu.from_physical(&[1.0, 0.0, 1.0]);
        let vac = StateVector::zeros(3);
        assert!(hllc(&eu, &l, &vac).is_finite());
        assert!(hllc(&eu, &vac, &l).is_finite());
        assert_eq!(hllc(&eu, &vac, &vac), StateVector::zeros(3));
        let iso = IsentropicEuler::new(Arc::new(PowerLaw::new(1.0, 2.0).unwrap()));
        let f = hll(&iso, &StateVector::new(&[1.0, 0.0]), &StateVector::new(&[0.0, 0.0]));
        assert!(f.is_finite() && f[0] > 0.0);
    }
}
