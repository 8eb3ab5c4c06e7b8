//! Construction of the contraction constants `v`, `C0`, `beta`, `epsilon`,
//! `a`, the set `O_a` and the shift velocity `V(U)`.
//!
//! Every constant is found by sampled search; the audit records the grids,
//! seeds and margins so a run can be reproduced and re-checked.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hugoniot::{estimate_kappa_delta, shock_curve, ShockCurve, ShockTriple};
use crate::numerics::unit_ball_offsets;
use crate::relent::Reference;
use crate::state::StateVector;
use crate::systems::{ConservationLaw, DomainBox, ShockFamily};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VelocityBand {
    pub v_lo: f64,
    pub v_hi: f64,
    pub v: f64,
}

/// `v_lo = max(sigma, F(U_L,U_R)/eta(U_L|U_R))`, `v_hi = lambda_-(U_L)`,
/// `v` the midpoint.
pub fn find_velocity_band(law: &dyn ConservationLaw, shock: &ShockTriple) -> Result<VelocityBand> {
    let (lm, _) = crate::systems::extremal_eigenvalues(law, &shock.left)?;
    if !(shock.sigma < lm) {
        return Err(Error::NotAOneShock {
            sigma: shock.sigma,
            lambda_minus: lm,
        });
    }
    let rr = Reference::new(law, &shock.right)?;
    let eta = rr.rel_entropy(law, &shock.left);
    if !(eta > 0.0) {
        return Err(Error::HypothesisViolation("shock endpoints coincide".into()));
    }
    let v_lo = shock.sigma.max(rr.rel_flux(law, &shock.left) / eta);
    if !(v_lo < lm) {
        return Err(Error::HypothesisViolation(format!(
            "empty velocity band: v_lo = {v_lo} >= lambda_-(U_L) = {lm}"
        )));
    }
    Ok(VelocityBand {
        v_lo,
        v_hi: lm,
        v: 0.5 * (v_lo + lm),
    })
}

/// Worst margins of the three ball conditions at one radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallMargins {
    /// `min (F(U,U_L) - v eta(U|U_L)) / eta(U|U_L)`.
    pub left: f64,
    /// `min (v eta(U|U_R) - F(U,U_R)) / eta(U|U_R)`.
    pub right: f64,
    /// `min lambda_-(U) - v`.
    pub speed: f64,
    pub points: usize,
}

impl BallMargins {
    pub fn pass(&self) -> bool {
        self.left > 0.0 && self.right > 0.0 && self.speed > 0.0
    }
}

/// Margins over `U_L + radius * offset` for the given unit-ball offsets.
/// Points outside the interior domain are skipped.
pub fn ball_margins(
    law: &dyn ConservationLaw,
    shock: &ShockTriple,
    v: f64,
    radius: f64,
    offsets: &[Vec<f64>],
) -> Result<BallMargins> {
    let rl = Reference::new(law, &shock.left)?;
    let rr = Reference::new(law, &shock.right)?;
    let m = law.dim();
    let init = || BallMargins {
        left: f64::INFINITY,
        right: f64::INFINITY,
        speed: f64::INFINITY,
        points: 0,
    };
    let out = offsets
        .par_iter()
        .map(|o| {
            let u = shock.left + StateVector::from_fn(m, |i| radius * o[i]);
            let mut b = init();
            if !law.is_interior(&u) {
                return b;
            }
            let el = rl.rel_entropy(law, &u);
            if el > 0.0 {
                b.left = (rl.rel_flux(law, &u) - v * el) / el;
            }
            let er = rr.rel_entropy(law, &u);
            if er > 0.0 {
                b.right = (v * er - rr.rel_flux(law, &u)) / er;
            }
            b.speed = match law.extremal_eigenvalues(&u) {
                Ok((lm, _)) => lm - v,
                Err(_) => f64::NEG_INFINITY,
            };
            b.points = 1;
            b
        })
        .reduce(init, |x, y| BallMargins {
            left: x.left.min(y.left),
            right: x.right.min(y.right),
            speed: x.speed.min(y.speed),
            points: x.points + y.points,
        });
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallConstants {
    pub c0: f64,
    pub beta: f64,
    pub margins: BallMargins,
}

/// Largest radius (to 1% relative) at which all three conditions hold on
/// the sampled ball, found by halving from `|U_R - U_L|` and then bisecting.
pub fn find_ball_constants(
    law: &dyn ConservationLaw,
    shock: &ShockTriple,
    v: f64,
    n_samples: usize,
    seed: u64,
) -> Result<BallConstants> {
    let offsets = unit_ball_offsets(law.dim(), n_samples, seed);
    let check = |r: f64| ball_margins(law, shock, v, r, &offsets);
    let mut hi = (shock.right - shock.left).norm();
    let mut lo_m = check(hi)?;
    if lo_m.pass() {
        return Err(Error::HypothesisViolation(format!(
            "ball conditions hold up to |U_R - U_L| = {hi}; v = {v} does not separate the states"
        )));
    }
    let mut lo = hi;
    let mut halvings = 0;
    loop {
        lo *= 0.5;
        halvings += 1;
        lo_m = check(lo)?;
        if lo_m.pass() {
            break;
        }
        hi = lo;
        if halvings > 60 {
            return Err(Error::HypothesisViolation(
                "no positive radius satisfies the ball conditions".into(),
            ));
        }
    }
    while (hi - lo) > 0.01 * lo {
        let mid = 0.5 * (lo + hi);
        let mm = check(mid)?;
        if mm.pass() {
            lo = mid;
            lo_m = mm;
        } else {
            hi = mid;
        }
    }
    Ok(BallConstants {
        c0: lo,
        beta: 0.5 * lo_m.left.min(lo_m.right),
        margins: lo_m,
    })
}

/// `eta(U|U_L) - a eta(U|U_R) <= 0`; states outside the domain are not members.
pub fn oa_membership(
    law: &dyn ConservationLaw,
    u: &StateVector,
    u_l: &StateVector,
    u_r: &StateVector,
    a: f64,
) -> Result<bool> {
    let rl = Reference::new(law, u_l)?;
    let rr = Reference::new(law, u_r)?;
    Ok(oa_value(law, &rl, &rr, u, a) <= 0.0)
}

fn oa_value(law: &dyn ConservationLaw, rl: &Reference, rr: &Reference, u: &StateVector, a: f64) -> f64 {
    if !law.is_admissible(u) {
        return f64::INFINITY;
    }
    rl.rel_entropy(law, u) - a * rr.rel_entropy(law, u)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OaExtent {
    /// `max |U - U_L|` over the boundary points found.
    pub radius: f64,
    /// Unit direction and distance from `U_L` to the boundary of `O_a`.
    pub rays: Vec<(Vec<f64>, f64)>,
}

/// Extent of the convex set `O_a` along sampled directions from `U_L`
/// (exponential search, then bisection).
pub fn oa_radius(
    law: &dyn ConservationLaw,
    u_l: &StateVector,
    u_r: &StateVector,
    a: f64,
    n_dirs: usize,
    seed: u64,
) -> Result<OaExtent> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Parameter(format!("weight a = {a} must lie in (0, 1)")));
    }
    let rl = Reference::new(law, u_l)?;
    let rr = Reference::new(law, u_r)?;
    let m = law.dim();
    let dirs: Vec<Vec<f64>> = unit_ball_offsets(m, 4 * n_dirs, seed)
        .into_iter()
        .filter(|o| (o.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12)
        .collect();
    let scale = (*u_r - *u_l).norm();
    let rays = dirs
        .par_iter()
        .map(|d| {
            let at = |t: f64| *u_l + StateVector::from_fn(m, |i| t * d[i]);
            let inside = |t: f64| oa_value(law, &rl, &rr, &at(t), a) <= 0.0;
            let (mut lo, mut hi) = (0.0, scale);
            let mut k = 0;
            while inside(hi) {
                lo = hi;
                hi *= 2.0;
                k += 1;
                if k > 60 {
                    return Err(Error::HypothesisViolation(format!(
                        "O_a is unbounded along direction {d:?}"
                    )));
                }
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if !(mid > lo && mid < hi) {
                    break;
                }
                if inside(mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok((d.clone(), lo))
        })
        .collect::<Result<Vec<_>>>()?;
    let radius = rays.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(OaExtent { radius, rays })
}

/// Sampling sizes and seed for the `epsilon`, `a` search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SearchGrid {
    /// Ball samples for `C0`, `beta`.
    pub ball_samples: usize,
    /// Base states `U_-` per curve bank.
    pub bases: usize,
    /// Points per bank curve.
    pub curve_points: usize,
    /// Bank curves run to `s_factor * |U_R - U_L|`.
    pub s_factor: f64,
    /// Sphere directions for the `O_a` extent.
    pub oa_directions: usize,
    /// Samples of the dissipation sweep for `kappa`.
    pub kappa_samples: usize,
    pub seed: u64,
}

impl Default for SearchGrid {
    fn default() -> Self {
        Self {
            ball_samples: 10_000,
            bases: 48,
            curve_points: 81,
            s_factor: 2.0,
            oa_directions: 256,
            kappa_samples: 161,
            seed: 0,
        }
    }
}

impl SearchGrid {
    /// Both grid dimensions multiplied by `factor`.
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            bases: self.bases * factor,
            curve_points: (self.curve_points - 1) * factor + 1,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ball_samples < 8 || self.bases < 1 || self.curve_points < 3 || self.kappa_samples < 3 {
            return Err(Error::Config(format!("search grid too coarse: {self:?}")));
        }
        if !(self.s_factor >= 1.0 && self.s_factor.is_finite()) {
            return Err(Error::Config(format!(
                "s_factor = {} must be at least 1",
                self.s_factor
            )));
        }
        Ok(())
    }
}

/// 1-shock curves from `U_L` and from `bases` quasi-random states of the
/// ball `B(U_L, radius)`.
pub fn curve_bank(
    law: &dyn ConservationLaw,
    u_l: &StateVector,
    radius: f64,
    bases: usize,
    s_max: f64,
    n_points: usize,
    seed: u64,
) -> Result<Vec<ShockCurve>> {
    let m = law.dim();
    let mut states = vec![*u_l];
    for o in unit_ball_offsets(m, bases, seed) {
        let u = *u_l + StateVector::from_fn(m, |i| radius * o[i]);
        if law.is_interior(&u) {
            states.push(u);
        }
    }
    states
        .par_iter()
        .map(|u| shock_curve(law, u, ShockFamily::First, s_max, n_points))
        .collect()
}

/// Sampled constant of the bound on the right-hand side of the perturbed
/// dissipation identity:
/// `max |R| / (|U-U_L|^2 (1 + |dsigma|) + |U-U_L| |dsigma|)`.
fn step3_constant(
    law: &dyn ConservationLaw,
    shock: &ShockTriple,
    s0: f64,
    bank: &[ShockCurve],
) -> Result<f64> {
    let rr = Reference::new(law, &shock.right)?;
    let ratios = bank
        .par_iter()
        .filter(|c| c.base != shock.left)
        .map(|c| {
            let dist = (c.base - shock.left).norm();
            let p0 = c.solve_at(law, s0)?;
            let r0 = Reference::new(law, &p0.state)?;
            let mut worst: f64 = 0.0;
            for p in &c.points {
                let on_curve = r0.rel_flux(law, &p.state) - p.sigma * r0.rel_entropy(law, &p.state);
                let against_r = rr.rel_flux(law, &p.state) - p.sigma * rr.rel_entropy(law, &p.state);
                let ds = (p.sigma - p0.sigma).abs();
                let den = dist * dist * (1.0 + ds) + dist * ds;
                worst = worst.max((on_curve - against_r).abs() / den);
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ratios.into_iter().fold(0.0, f64::max))
}

/// `(-F(U-,U_L) + sigma eta(U-|U_L), F(S,U_R) - sigma eta(S|U_R))` at every
/// bank point with `sigma <= v`.
fn master_terms(
    law: &dyn ConservationLaw,
    shock: &ShockTriple,
    v: f64,
    bank: &[ShockCurve],
) -> Result<Vec<(f64, f64)>> {
    let rl = Reference::new(law, &shock.left)?;
    let rr = Reference::new(law, &shock.right)?;
    let terms: Vec<Vec<(f64, f64)>> = bank
        .par_iter()
        .map(|c| {
            let fl = rl.rel_flux(law, &c.base);
            let el = rl.rel_entropy(law, &c.base);
            c.points
                .iter()
                .filter(|p| p.sigma <= v)
                .map(|p| {
                    (
                        -fl + p.sigma * el,
                        rr.rel_flux(law, &p.state) - p.sigma * rr.rel_entropy(law, &p.state),
                    )
                })
                .collect()
        })
        .collect();
    Ok(terms.into_iter().flatten().collect())
}

/// Slack on the master inequality: it vanishes exactly at `U_- = U_L`,
/// `s = s0`.
pub const MASTER_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AStar {
    pub epsilon: f64,
    /// True when no candidate `epsilon` met the smallness criterion and the
    /// smallest one was used.
    pub epsilon_fallback: bool,
    pub a: f64,
    pub a_star: f64,
    pub oa_radius: f64,
    pub kappa: f64,
    pub delta: f64,
    pub c_step3: f64,
    /// Largest master-inequality value at the returned `a`.
    pub master_max: f64,
    pub grid_points: usize,
}

/// Pick `epsilon` from `0.49 * 2^-k` by `C (eps C0 + (eps C0)^2) <= kappa`,
/// then halve `a` from 1/2 until `O_a` lies in `B(U_L, eps C0)` and the
/// master inequality holds on the curve bank. Returns half the first
/// passing value.
pub fn find_a_star(
    law: &dyn ConservationLaw,
    shock: &ShockTriple,
    v: f64,
    c0: f64,
    grid: &SearchGrid,
) -> Result<AStar> {
    grid.validate()?;
    let s0 = (shock.right - shock.left).norm();
    let s_bank = grid.s_factor * s0;
    let main = shock_curve(law, &shock.left, ShockFamily::First, s_bank, grid.curve_points)?;
    let on_curve = main.solve_at(law, s0)?;
    if (on_curve.state - shock.right).norm() > 1e-6 * (1.0 + s0) {
        return Err(Error::HypothesisViolation(format!(
            "U_R = {:?} is not on the 1-shock curve of U_L (curve gives {:?})",
            shock.right, on_curve.state
        )));
    }
    let kd = estimate_kappa_delta(law, &main, s0, 0.0, s_bank, grid.kappa_samples)?;
    if !(kd.kappa > 0.0) {
        return Err(Error::HypothesisViolation(format!(
            "dissipation sweep gives kappa = {} (max D = {:e})",
            kd.kappa, kd.max_d
        )));
    }
    let wide = curve_bank(law, &shock.left, c0, grid.bases, s_bank, grid.curve_points, grid.seed)?;
    let c = step3_constant(law, shock, s0, &wide)?;

    let mut epsilon = None;
    for k in 0..30 {
        let e = 0.49 * 0.5f64.powi(k);
        let r = e * c0;
        if c * (r + r * r) <= kd.kappa {
            epsilon = Some(e);
            break;
        }
    }
    let epsilon_fallback = epsilon.is_none();
    let epsilon = epsilon.unwrap_or(0.49 * 0.5f64.powi(29));
    let ball = epsilon * c0;

    let bank = curve_bank(law, &shock.left, ball, grid.bases, s_bank, grid.curve_points, grid.seed)?;
    let terms = master_terms(law, shock, v, &bank)?;
    let master = |a: f64| terms.iter().map(|(f, g)| f + a * g).fold(f64::NEG_INFINITY, f64::max);

    let mut a = 0.5;
    loop {
        let ext = oa_radius(law, &shock.left, &shock.right, a, grid.oa_directions, grid.seed)?;
        if ext.radius <= ball && master(a) <= MASTER_TOL {
            let half = 0.5 * a;
            let ext_half =
                oa_radius(law, &shock.left, &shock.right, half, grid.oa_directions, grid.seed)?;
            return Ok(AStar {
                epsilon,
                epsilon_fallback,
                a: half,
                a_star: a,
                oa_radius: ext_half.radius,
                kappa: kd.kappa,
                delta: kd.delta,
                c_step3: c,
                master_max: master(half),
                grid_points: terms.len(),
            });
        }
        a *= 0.5;
        if a < 1e-12 {
            return Err(Error::HypothesisViolation(format!(
                "weight a underflowed: O_a never fits in B(U_L, {ball}) or the master inequality fails"
            )));
        }
    }
}

/// The constructed constants and the audit trail of their search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionConfig {
    pub shock: ShockTriple,
    pub v_band: (f64, f64),
    pub v: f64,
    pub c0: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub a: f64,
    pub audit: ConstantsAudit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsAudit {
    pub grid: SearchGrid,
    pub ball_margins: Option<BallMargins>,
    pub a_search: Option<AStar>,
    pub oa_radius: f64,
    /// Set when `v` or `a` came from an override instead of the search.
    pub overridden: Vec<String>,
}

/// Optional replacements for the searched `v` and `a`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsOverride {
    pub v: Option<f64>,
    pub a: Option<f64>,
}

impl ContractionConfig {
    /// Full construction: band, ball constants, `epsilon` and `a`.
    pub fn construct(
        law: &dyn ConservationLaw,
        shock: &ShockTriple,
        grid: &SearchGrid,
        overrides: &ConstantsOverride,
    ) -> Result<Self> {
        shock.validate(law)?;
        let band = find_velocity_band(law, shock)?;
        let mut overridden = Vec::new();
        let v = match overrides.v {
            Some(v) => {
                if !(v > band.v_lo && v < band.v_hi) {
                    return Err(Error::Config(format!(
                        "override v = {v} is outside the band ({}, {})",
                        band.v_lo, band.v_hi
                    )));
                }
                overridden.push("v".to_string());
                v
            }
            None => band.v,
        };
        let ball = find_ball_constants(law, shock, v, grid.ball_samples, grid.seed)?;
        let (a, epsilon, a_search, oa) = match overrides.a {
            Some(a) => {
                if !(a > 0.0 && a < 1.0) {
                    return Err(Error::Config(format!("override a = {a} must lie in (0, 1)")));
                }
                overridden.push("a".to_string());
                let ext = oa_radius(law, &shock.left, &shock.right, a, grid.oa_directions, grid.seed)?;
                (a, ext.radius / ball.c0, None, ext.radius)
            }
            None => {
                let s = find_a_star(law, shock, v, ball.c0, grid)?;
                (s.a, s.epsilon, Some(s.clone()), s.oa_radius)
            }
        };
        Ok(Self {
            shock: *shock,
            v_band: (band.v_lo, band.v_hi),
            v,
            c0: ball.c0,
            beta: ball.beta,
            epsilon,
            a,
            audit: ConstantsAudit {
                grid: *grid,
                ball_margins: Some(ball.margins),
                a_search,
                oa_radius: oa,
                overridden,
            },
        })
    }

    /// Direct assembly from known constants (tests and replays).
    pub fn from_parts(shock: ShockTriple, v: f64, c0: f64, beta: f64, epsilon: f64, a: f64) -> Self {
        Self {
            shock,
            v_band: (f64::NAN, f64::NAN),
            v,
            c0,
            beta,
            epsilon,
            a,
            audit: ConstantsAudit {
                grid: SearchGrid::default(),
                ball_margins: None,
                a_search: None,
                oa_radius: f64::NAN,
                overridden: vec!["all".into()],
            },
        }
    }

    pub fn u_l(&self) -> &StateVector {
        &self.shock.left
    }

    pub fn u_r(&self) -> &StateVector {
        &self.shock.right
    }

    /// References at `U_L` and `U_R` for repeated evaluation.
    pub fn references(&self, law: &dyn ConservationLaw) -> Result<ShiftVelocity> {
        Ok(ShiftVelocity {
            left: Reference::new(law, &self.shock.left)?,
            right: Reference::new(law, &self.shock.right)?,
            v: self.v,
            a: self.a,
            c0: self.c0,
        })
    }

    /// Re-check the type invariants on a fresh sample with `seed`.
    pub fn audit_invariants(
        &self,
        law: &dyn ConservationLaw,
        n_samples: usize,
        seed: u64,
    ) -> Result<InvariantAudit> {
        let (lm, _) = crate::systems::extremal_eigenvalues(law, &self.shock.left)?;
        let offsets = unit_ball_offsets(law.dim(), n_samples, seed);
        let margins = ball_margins(law, &self.shock, self.v, self.c0, &offsets)?;
        let ext = oa_radius(
            law,
            &self.shock.left,
            &self.shock.right,
            self.a,
            self.audit.grid.oa_directions.max(16),
            seed,
        )?;
        let band_ok = self.shock.sigma < self.v && self.v < lm;
        let weight_ok = self.a > 0.0 && self.a < 1.0;
        let oa_ok = ext.radius <= self.epsilon * self.c0 * (1.0 + 1e-9);
        let ball_ok = margins.pass()
            && margins.left.min(margins.right) >= self.beta * (1.0 - 1e-9);
        Ok(InvariantAudit {
            band_ok,
            weight_ok,
            oa_ok,
            ball_ok,
            margins,
            oa_radius: ext.radius,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvariantAudit {
    pub band_ok: bool,
    pub weight_ok: bool,
    pub oa_ok: bool,
    pub ball_ok: bool,
    pub margins: BallMargins,
    pub oa_radius: f64,
}

impl InvariantAudit {
    pub fn pass(&self) -> bool {
        self.band_ok && self.weight_ok && self.oa_ok && self.ball_ok
    }
}

/// The velocity field `V(U)` with cached references.
#[derive(Debug, Clone, Copy)]
pub struct ShiftVelocity {
    pub left: Reference,
    pub right: Reference,
    pub v: f64,
    pub a: f64,
    pub c0: f64,
}

impl ShiftVelocity {
    /// `v - ([-F(U,U_L) + v eta_L]_+ + a [F(U,U_R) - v eta_R]_+) / (eta_L - a eta_R)`,
    /// exactly `v` on `B(U_L, C0)`.
    pub fn eval(&self, law: &dyn ConservationLaw, u: &StateVector) -> Result<f64> {
        if (*u - self.left.state).norm() <= self.c0 {
            return Ok(self.v);
        }
        let el = self.left.rel_entropy(law, u);
        let er = self.right.rel_entropy(law, u);
        let num = (-self.left.rel_flux(law, u) + self.v * el).max(0.0)
            + self.a * (self.right.rel_flux(law, u) - self.v * er).max(0.0);
        if num == 0.0 {
            return Ok(self.v);
        }
        let den = el - self.a * er;
        if !(den > 0.0) {
            return Err(Error::ConfigIntegrity(format!(
                "shift velocity at {u:?}: numerator {num:e} > 0 with denominator {den:e} <= 0"
            )));
        }
        Ok(self.v - num / den)
    }
}

/// Checked `V(U)` for a single state.
pub fn shift_velocity(
    law: &dyn ConservationLaw,
    u: &StateVector,
    cfg: &ContractionConfig,
) -> Result<f64> {
    u.check_finite()?;
    if !law.is_admissible(u) {
        return Err(Error::InvalidState(format!("state {u:?} is outside the domain")));
    }
    cfg.references(law)?.eval(law, u)
}

/// Sampled `max |V(U)|` over the box, the Lipschitz bound of the drift.
pub fn velocity_bound(
    law: &dyn ConservationLaw,
    cfg: &ContractionConfig,
    domain: &DomainBox,
    n_samples: usize,
    seed: u64,
) -> Result<f64> {
    let sv = cfg.references(law)?;
    let mut pts = domain.sample(law, n_samples, seed);
    pts.push(cfg.shock.left);
    pts.push(cfg.shock.right);
    let vals = pts
        .par_iter()
        .map(|u| sv.eval(law, u).map(f64::abs))
        .collect::<Result<Vec<f64>>>()?;
    Ok(vals.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::Burgers;

    fn s(u: f64) -> StateVector {
        StateVector::scalar(u)
    }

    fn burgers_shock() -> ShockTriple {
        ShockTriple::new(&Burgers, s(1.0), s(-1.0), 0.0).unwrap()
    }

    #[test]
    fn band_examples() {
        let b = find_velocity_band(&Burgers, &burgers_shock()).unwrap();
        assert!((b.v_lo - 2.0 / 3.0).abs() < 1e-15 && b.v_hi == 2.0);
        assert!((b.v - 4.0 / 3.0).abs() < 1e-15);
        let bad = ShockTriple {
            left: s(-1.0),
            right: s(1.0),
            sigma: 0.0,
        };
        assert!(matches!(find_velocity_band(&Burgers, &bad), Err(Error::NotAOneShock { .. })));
    }

    #[test]
    fn ball_constants_burgers() {
        let sh = burgers_shock();
        let b = find_ball_constants(&Burgers, &sh, 4.0 / 3.0, 2000, 3).unwrap();
        assert!(b.c0 >= 0.30 && b.c0 <= 1.0 / 3.0 + 1e-6, "{b:?}");
        assert!(b.beta > 0.0);
        let offs = unit_ball_offsets(1, 100, 3);
        assert!(!ball_margins(&Burgers, &sh, 4.0 / 3.0, 2.0, &offs).unwrap().pass());
    }

    #[test]
    fn oa_interval_burgers() {
        let (l, r) = (s(1.0), s(-1.0));
        let ext = oa_radius(&Burgers, &l, &r, 0.25, 8, 1).unwrap();
        let mut ends: Vec<f64> = ext.rays.iter().map(|(d, t)| 1.0 + d[0] * t).collect();
        ends.sort_by(f64::total_cmp);
        assert!((ends[0] - 1.0 / 3.0).abs() < 1e-9 && (ends[1] - 3.0).abs() < 1e-9, "{ends:?}");
        assert!((ext.radius - 2.0).abs() < 1e-9);
        assert!(oa_membership(&Burgers, &l, &l, &r, 1e-6).unwrap());
        assert!(!oa_membership(&Burgers, &r, &l, &r, 0.9).unwrap());
        assert!(oa_membership(&Burgers, &s(2.9), &l, &r, 0.25).unwrap());
        assert!(!oa_membership(&Burgers, &s(3.1), &l, &r, 0.25).unwrap());
    }

    #[test]
    fn shift_velocity_values() {
        let cfg = ContractionConfig::from_parts(burgers_shock(), 4.0 / 3.0, 1.0 / 3.0, 0.1, 0.49, 0.004);
        assert_eq!(shift_velocity(&Burgers, &s(1.2), &cfg).unwrap(), 4.0 / 3.0);
        let vr = shift_velocity(&Burgers, &s(-1.0), &cfg).unwrap();
        assert!((vr + 2.0 / 3.0).abs() < 1e-14, "{vr}");
        let v3 = shift_velocity(&Burgers, &s(3.0), &cfg).unwrap();
        assert!(v3.is_finite() && v3 <= 4.0 / 3.0);
    }

    #[test]
    fn full_construction_burgers() {
        let grid = SearchGrid {
            ball_samples: 2000,
            ..SearchGrid::default()
        };
        let cfg = ContractionConfig::construct(&Burgers, &burgers_shock(), &grid, &Default::default())
            .unwrap();
        assert!(cfg.a > 0.0 && cfg.a <= 0.006, "{cfg:?}");
        assert!(cfg.audit_invariants(&Burgers, 3000, 99).unwrap().pass());
    }
}
