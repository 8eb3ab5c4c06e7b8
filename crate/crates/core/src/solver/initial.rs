use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldSnapshot, Grid1D};
use crate::numerics::{cell_average, integrate, GAUSS_LEGENDRE_5};
use crate::state::StateVector;
use crate::systems::ConservationLaw;

/// Initial-data families around the step `S(x) = U_L (x < 0), U_R (x > 0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    /// The step displaced to `offset`.
    PureShock {
        #[serde(default)]
        offset: f64,
    },
    /// The step scaled by `1 + amplitude cos^2(pi (x - center) / (2 width))`
    /// on `|x - center| < width`.
    ShockPlusBump {
        amplitude: f64,
        width: f64,
        center: f64,
    },
    /// Burgers profile `1 + sqrt(2 r eps) / (1 - x)^(1/2 + r)` for `x < 0`,
    /// `-1` for `x > 0`.
    Prop14 { r: f64, eps: f64 },
    /// The step scaled by `1 + amplitude g(x)` with `g` a seeded sine series
    /// on `support`, `|g| <= 1`.
    RandomPerturbation {
        seed: u64,
        amplitude: f64,
        support: (f64, f64),
    },
}

/// `u0(x)` of the Burgers example.
pub fn prop14_profile(r: f64, eps: f64, x: f64) -> f64 {
    if x < 0.0 {
        1.0 + (2.0 * r * eps).sqrt() / (1.0 - x).powf(0.5 + r)
    } else {
        -1.0
    }
}

/// Pointwise description of initial data.
#[derive(Debug, Clone)]
pub struct InitialProfile {
    kind: InitialData,
    u_l: StateVector,
    u_r: StateVector,
    modes: Vec<f64>,
}

impl InitialProfile {
    pub fn new(
        law: &dyn ConservationLaw,
        kind: &InitialData,
        u_l: StateVector,
        u_r: StateVector,
    ) -> Result<Self> {
        let mut modes = Vec::new();
        match kind {
            InitialData::PureShock { offset } => {
                if !offset.is_finite() {
                    return Err(Error::Parameter("shock offset must be finite".into()));
                }
            }
            InitialData::ShockPlusBump {
                amplitude, width, ..
            } => {
                if !(*width > 0.0) || !amplitude.is_finite() || *amplitude <= -1.0 {
                    return Err(Error::Parameter(format!(
                        "bump needs width > 0 and amplitude > -1 (got {width}, {amplitude})"
                    )));
                }
            }
            InitialData::Prop14 { r, eps } => {
                if !(*r > 0.0 && *r < 0.5) {
                    return Err(Error::Parameter(format!("r = {r} must lie in (0, 1/2)")));
                }
                if !(*eps >= 0.0 && eps.is_finite()) {
                    return Err(Error::Parameter(format!("eps = {eps} must be nonnegative")));
                }
                if law.dim() != 1 {
                    return Err(Error::Parameter(
                        "the prop14 profile is defined for Burgers only".into(),
                    ));
                }
            }
            InitialData::RandomPerturbation {
                seed,
                amplitude,
                support,
            } => {
                if !(support.1 > support.0) || amplitude.abs() >= 1.0 {
                    return Err(Error::Parameter(
                        "random perturbation needs a nonempty support and |amplitude| < 1".into(),
                    ));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let raw: Vec<f64> = (1..=6)
                    .map(|k| rng.gen_range(-1.0..1.0) / k as f64)
                    .collect();
                let norm: f64 = raw.iter().map(|c: &f64| c.abs()).sum();
                modes = raw.iter().map(|c| c / norm.max(1e-300)).collect();
            }
        }
        let kind = match kind {
            InitialData::ShockPlusBump { amplitude, .. } if *amplitude == 0.0 => {
                InitialData::PureShock { offset: 0.0 }
            }
            other => other.clone(),
        };
        Ok(Self {
            kind,
            u_l,
            u_r,
            modes,
        })
    }

    fn step_value(&self, x: f64) -> StateVector {
        if x < 0.0 {
            self.u_l
        } else {
            self.u_r
        }
    }

    pub fn value(&self, x: f64) -> StateVector {
        match &self.kind {
            InitialData::PureShock { offset } => {
                if x < *offset {
                    self.u_l
                } else {
                    self.u_r
                }
            }
            InitialData::ShockPlusBump {
                amplitude,
                width,
                center,
            } => {
                let d = x - center;
                let phi = if d.abs() < *width {
                    (PI * d / (2.0 * width)).cos().powi(2)
                } else {
                    0.0
                };
                self.step_value(x) * (1.0 + amplitude * phi)
            }
            InitialData::Prop14 { r, eps } => StateVector::scalar(prop14_profile(*r, *eps, x)),
            InitialData::RandomPerturbation {
                amplitude, support, ..
            } => {
                let (a, b) = *support;
                let g = if x > a && x < b {
                    let t = (x - a) / (b - a);
                    self.modes
                        .iter()
                        .enumerate()
                        .map(|(k, c)| c * ((k + 1) as f64 * PI * t).sin())
                        .sum()
                } else {
                    0.0
                };
                self.step_value(x) * (1.0 + amplitude * g)
            }
        }
    }

    /// Points where the profile or its derivative may jump.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b = match &self.kind {
            InitialData::PureShock { offset } => vec![*offset],
            InitialData::ShockPlusBump { width, center, .. } => {
                vec![0.0, center - width, *center, center + width]
            }
            InitialData::Prop14 { .. } => vec![0.0],
            InitialData::RandomPerturbation { support, .. } => vec![0.0, support.0, support.1],
        };
        b.sort_by(f64::total_cmp);
        b
    }

    fn pieces(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let mut cuts = vec![a];
        cuts.extend(self.breakpoints().into_iter().filter(|p| *p > a && *p < b));
        cuts.push(b);
        cuts.windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// Average over `[a, b]` by 5-point Gauss–Legendre on each smooth piece.
    pub fn average(&self, a: f64, b: f64) -> StateVector {
        let mut acc = StateVector::zeros(self.u_l.dim());
        for (p, q) in self.pieces(a, b) {
            acc += cell_average(|x| self.value(x), p, q) * (q - p);
        }
        acc * (1.0 / (b - a))
    }

    /// `|| U0 - S ||_{L^2}^2` over the whole line. The profile is integrated
    /// piecewise on `[x_min, x_max]`; outside the grid only the prop14 tail
    /// is nonzero and is integrated after the change of variables
    /// `1 - x = z^(-1/r)`.
    pub fn distance_sq_to_step(&self, grid: &Grid1D) -> Result<f64> {
        let mut total = 0.0;
        let n_sub = grid.n_cells.max(64);
        let h = grid.length() / n_sub as f64;
        for i in 0..n_sub {
            let a = grid.x_min + i as f64 * h;
            let b = if i + 1 == n_sub { grid.x_max } else { a + h };
            for (p, q) in self.pieces(a, b) {
                let half = 0.5 * (q - p);
                let mid = 0.5 * (p + q);
                for (node, w) in GAUSS_LEGENDRE_5 {
                    let x = mid + half * node;
                    total += w * half * (self.value(x) - self.step_value(x)).norm_sq();
                }
            }
        }
        if let InitialData::Prop14 { r, eps } = self.kind {
            if grid.x_min < 0.0 && eps > 0.0 {
                let k = 2.0 * r * eps;
                let z_max = (1.0 - grid.x_min).powf(-r);
                let tail = integrate(
                    |z| {
                        if z <= 0.0 {
                            return 0.0;
                        }
                        // (u0 - 1)^2 dx with 1 - x = z^(-1/r)
                        let one_minus_x = z.powf(-1.0 / r);
                        k * one_minus_x.powf(-1.0 - 2.0 * r) * one_minus_x / (r * z)
                    },
                    0.0,
                    z_max,
                    1e-13,
                )?;
                total += tail;
            }
        }
        Ok(total)
    }
}

/// Cell averages of the chosen initial data.
pub fn initial_data(
    law: &dyn ConservationLaw,
    kind: &InitialData,
    u_l: StateVector,
    u_r: StateVector,
    grid: &Grid1D,
) -> Result<FieldSnapshot> {
    grid.validate()?;
    let prof = InitialProfile::new(law, kind, u_l, u_r)?;
    let cells = (0..grid.n_cells)
        .map(|i| {
            let u = prof.average(grid.edge(i), grid.edge(i + 1));
            if law.is_admissible(&u) {
                Ok(u)
            } else {
                Err(Error::Parameter(format!(
                    "initial cell {i} is outside the domain: {u:?}"
                )))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    FieldSnapshot::new(0.0, *grid, cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::Burgers;

    fn s(u: f64) -> StateVector {
        StateVector::scalar(u)
    }

    #[test]
    fn prop14_distance_equals_eps() {
        let g = Grid1D::new(-10.0, 10.0, 2000).unwrap();
        let kind = InitialData::Prop14 { r: 0.1, eps: 0.01 };
        let p = InitialProfile::new(&Burgers, &kind, s(1.0), s(-1.0)).unwrap();
        let d = p.distance_sq_to_step(&g).unwrap();
        assert!((0.0099..=0.0101).contains(&d), "{d}");
        assert!((d - 0.01).abs() < 1e-8);
    }

    #[test]
    fn prop14_parameter_errors() {
        for r in [0.0, 0.5, 0.7, -0.1] {
            let kind = InitialData::Prop14 { r, eps: 0.01 };
            assert!(matches!(
                InitialProfile::new(&Burgers, &kind, s(1.0), s(-1.0)),
                Err(Error::Parameter(_))
            ));
        }
    }

    #[test]
    fn zero_bump_is_pure_shock() {
        let g = Grid1D::new(-5.0, 5.0, 101).unwrap();
        let a = initial_data(
            &Burgers,
            &InitialData::ShockPlusBump {
                amplitude: 0.0,
                width: 0.5,
                center: -1.0,
            },
            s(1.0),
            s(-1.0),
            &g,
        )
        .unwrap();
        let b = initial_data(
            &Burgers,
            &InitialData::PureShock { offset: 0.0 },
            s(1.0),
            s(-1.0),
            &g,
        )
        .unwrap();
        assert_eq!(a, b);
        // the cell straddling 0 holds the exact average
        assert!(b.cells[50][0].abs() < 1e-14);
    }

    #[test]
    fn bump_mass_matches_closed_form() {
        // int (1 + A cos^2) over the bump adds A w
        let g = Grid1D::new(-5.0, 5.0, 400).unwrap();
        let f = initial_data(
            &Burgers,
            &InitialData::ShockPlusBump {
                amplitude: 0.3,
                width: 0.5,
                center: -1.0,
            },
            s(1.0),
            s(-1.0),
            &g,
        )
        .unwrap();
        let expected = 5.0 - 5.0 + 0.3 * 0.5;
        assert!((f.total()[0] - expected).abs() < 1e-12);
    }

    #[test]
    fn random_perturbation_is_seeded_and_bounded() {
        let g = Grid1D::new(-5.0, 5.0, 200).unwrap();
        let kind = InitialData::RandomPerturbation {
            seed: 4,
            amplitude: 0.2,
            support: (-3.0, -0.5),
        };
        let a = initial_data(&Burgers, &kind, s(1.0), s(-1.0), &g).unwrap();
        let b = initial_data(&Burgers, &kind, s(1.0), s(-1.0), &g).unwrap();
        assert_eq!(a, b);
        assert!(a.cells.iter().all(|c| c[0].abs() <= 1.2 + 1e-12));
        assert!(a.cells.iter().any(|c| (c[0] - 1.0).abs() > 1e-3));
    }
}
