use serde::{Deserialize, Serialize};

use super::ConservationLaw;
use crate::error::{Error, Result};
use crate::numerics::QuasiRandom;
use crate::state::StateVector;

/// Box of physical variables (`u`; `rho, u`; or `rho, u, e`) standing in for
/// the bounded set of solution values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainBox {
    pub bounds: Vec<(f64, f64)>,
}

impl DomainBox {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::Config("domain box needs at least one bound".into()));
        }
        for (i, (lo, hi)) in bounds.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::Config(format!(
                    "domain box bound {i} = ({lo}, {hi}) is not a finite interval"
                )));
            }
        }
        Ok(Self { bounds })
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn contains_physical(&self, p: &[f64]) -> bool {
        p.len() == self.dim()
            && p.iter()
                .zip(&self.bounds)
                .all(|(v, (lo, hi))| {
                    let slack = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
                    *v >= *lo - slack && *v <= *hi + slack
                })
    }

    pub fn contains(&self, law: &dyn ConservationLaw, u: &StateVector) -> bool {
        law.is_admissible(u) && self.contains_physical(&law.to_physical(u))
    }

    /// `n` quasi-random admissible states, corners of the box first.
    pub fn sample(&self, law: &dyn ConservationLaw, n: usize, seed: u64) -> Vec<StateVector> {
        let d = self.dim();
        let mut out = Vec::with_capacity(n);
        for mask in 0..(1usize << d) {
            if out.len() >= n / 2 {
                break;
            }
            let p: Vec<f64> = (0..d)
                .map(|k| {
                    let (lo, hi) = self.bounds[k];
                    if mask >> k & 1 == 1 {
                        hi
                    } else {
                        lo
                    }
                })
                .collect();
            let u = law.from_physical(&p);
            if law.is_admissible(&u) {
                out.push(u);
            }
        }
        let qr = QuasiRandom::new(d, seed);
        let mut i = 0;
        while out.len() < n && i < 20 * n + 100 {
            let q = qr.point(i);
            i += 1;
            let p: Vec<f64> = q
                .iter()
                .zip(&self.bounds)
                .map(|(t, (lo, hi))| lo + t * (hi - lo))
                .collect();
            let u = law.from_physical(&p);
            if law.is_admissible(&u) {
                out.push(u);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{Burgers, FullEuler};

    #[test]
    fn rejects_inverted_bounds() {
        assert!(DomainBox::new(vec![(1.0, 0.0)]).is_err());
        assert!(DomainBox::new(vec![]).is_err());
    }

    #[test]
    fn samples_lie_in_box() {
        let eu = FullEuler::new(1.4).unwrap();
        let b = DomainBox::new(vec![(0.0, 2.0), (-1.0, 1.0), (0.2, 3.0)]).unwrap();
        let pts = b.sample(&eu, 64, 9);
        assert_eq!(pts.len(), 64);
        // vacuum corner is admitted
        assert!(pts.iter().any(|u| eu.is_vacuum(u)));
        for u in &pts {
            assert!(eu.is_vacuum(u) || b.contains(&eu, u));
        }
        let bb = DomainBox::new(vec![(-2.0, 2.0)]).unwrap();
        assert!(bb.sample(&Burgers, 10, 1).iter().all(|u| u[0].abs() <= 2.0));
    }
}
