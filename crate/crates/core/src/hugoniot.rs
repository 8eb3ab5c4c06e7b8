//! Rankine–Hugoniot shock curves, audits of the Liu and strengthening
//! conditions, and the dissipation identities along a 1-shock curve.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{integrate, solve_dense};
use crate::relent::Reference;
use crate::state::StateVector;
use crate::systems::{ConservationLaw, ShockFamily};

/// Scaled tolerance on Rankine–Hugoniot residuals and entropy production.
pub const RH_TOL: f64 = 1e-10;

/// `A(right) - A(left) - sigma (right - left)` and the entropy production
/// `G(right) - G(left) - sigma (eta(right) - eta(left))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhResidual {
    pub residual: StateVector,
    pub entropy_production: f64,
    /// `|residual|_inf` divided by the flux scale of the pair.
    pub scaled: f64,
}

pub fn rh_residual(
    law: &dyn ConservationLaw,
    left: &StateVector,
    right: &StateVector,
    sigma: f64,
) -> Result<RhResidual> {
    for u in [left, right] {
        u.check_finite()?;
        if !law.is_admissible(u) {
            return Err(Error::InvalidState(format!(
                "state {u:?} is outside the domain of {}",
                law.name()
            )));
        }
    }
    if !sigma.is_finite() {
        return Err(Error::InvalidState(format!("shock speed {sigma} is not finite")));
    }
    if left == right {
        return Ok(RhResidual {
            residual: StateVector::zeros(law.dim()),
            entropy_production: 0.0,
            scaled: 0.0,
        });
    }
    let (al, ar) = (law.flux(left), law.flux(right));
    let jump = *right - *left;
    let residual = ar - al - jump * sigma;
    let entropy_production = law.entropy_flux(right)
        - law.entropy_flux(left)
        - sigma * (law.entropy(right) - law.entropy(left));
    let scale = 1f64
        .max(al.max_abs())
        .max(ar.max_abs())
        .max(sigma.abs() * jump.max_abs());
    Ok(RhResidual {
        residual,
        entropy_production,
        scaled: residual.max_abs() / scale,
    })
}

/// A discontinuity `(left, right)` travelling at `sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShockTriple {
    pub left: StateVector,
    pub right: StateVector,
    pub sigma: f64,
}

impl ShockTriple {
    /// Checked constructor: Rankine–Hugoniot and entropy admissibility.
    pub fn new(
        law: &dyn ConservationLaw,
        left: StateVector,
        right: StateVector,
        sigma: f64,
    ) -> Result<Self> {
        let t = Self { left, right, sigma };
        t.validate(law)?;
        Ok(t)
    }

    /// Speed from the least-squares Rankine–Hugoniot relation, then checked.
    pub fn from_states(law: &dyn ConservationLaw, left: StateVector, right: StateVector) -> Result<Self> {
        let jump = right - left;
        if jump.norm_sq() == 0.0 {
            return Err(Error::Config("shock endpoints coincide".into()));
        }
        let sigma = (law.flux(&right) - law.flux(&left)).dot(&jump) / jump.norm_sq();
        Self::new(law, left, right, sigma)
    }

    pub fn validate(&self, law: &dyn ConservationLaw) -> Result<()> {
        let r = rh_residual(law, &self.left, &self.right, self.sigma)?;
        if r.scaled > RH_TOL {
            return Err(Error::Config(format!(
                "Rankine-Hugoniot residual {:e} exceeds {RH_TOL:e} for ({:?}, {:?}, sigma = {})",
                r.scaled, self.left, self.right, self.sigma
            )));
        }
        if r.entropy_production > RH_TOL {
            return Err(Error::Config(format!(
                "discontinuity ({:?}, {:?}, sigma = {}) produces entropy {:e}",
                self.left, self.right, self.sigma, r.entropy_production
            )));
        }
        Ok(())
    }
}

/// Margins of the separation hypotheses at one discontinuity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeparationAudit {
    /// `sigma - lambda_-(right)`; must be nonnegative near `U_L`.
    pub h2_margin: f64,
    /// True when `sigma < lambda_-(left)`, i.e. the pair must be a 1-shock.
    pub h3_applies: bool,
}

pub fn separation_audit(law: &dyn ConservationLaw, t: &ShockTriple) -> Result<SeparationAudit> {
    let (lm_right, _) = crate::systems::extremal_eigenvalues(law, &t.right)?;
    let (lm_left, _) = crate::systems::extremal_eigenvalues(law, &t.left)?;
    Ok(SeparationAudit {
        h2_margin: t.sigma - lm_right,
        h3_applies: t.sigma < lm_left,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShockCurvePoint {
    pub s: f64,
    pub state: StateVector,
    pub sigma: f64,
}

/// A point together with its `s`-derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub s: f64,
    pub state: StateVector,
    pub sigma: f64,
    pub dstate: StateVector,
    pub dsigma: f64,
}

/// Sampled shock curve `s -> (S_U(s), sigma_U(s))` with `s = |S_U(s) - U|`,
/// interpolated by cubic Hermite pieces.
#[derive(Debug, Clone)]
pub struct ShockCurve {
    pub base: StateVector,
    pub family: ShockFamily,
    pub points: Vec<ShockCurvePoint>,
    slopes: Vec<(StateVector, f64)>,
    closed_form: bool,
}

impl ShockCurve {
    pub fn s_max(&self) -> f64 {
        self.points.last().map(|p| p.s).unwrap_or(0.0)
    }

    pub fn is_closed_form(&self) -> bool {
        self.closed_form
    }

    /// Stored derivatives `(dS/ds, dsigma/ds)` at each point.
    pub fn slopes(&self) -> &[(StateVector, f64)] {
        &self.slopes
    }

    fn check_range(&self, s: f64) -> Result<()> {
        if !(s >= 0.0 && s <= self.s_max() * (1.0 + 1e-12)) {
            return Err(Error::OutOfRange(format!(
                "curve parameter {s} outside [0, {}]",
                self.s_max()
            )));
        }
        Ok(())
    }

    /// The shock triple of point `k`, oriented by family: `(U, S)` for the
    /// 1-family and `(S, U)` for the n-family.
    pub fn triple(&self, k: usize) -> ShockTriple {
        let p = &self.points[k];
        match self.family {
            ShockFamily::First => ShockTriple {
                left: self.base,
                right: p.state,
                sigma: p.sigma,
            },
            ShockFamily::Last => ShockTriple {
                left: p.state,
                right: self.base,
                sigma: p.sigma,
            },
        }
    }

    /// Hermite interpolation of state, speed and their derivatives.
    pub fn sample_at(&self, s: f64) -> Result<CurveSample> {
        self.check_range(s)?;
        let s = s.min(self.s_max());
        let n = self.points.len();
        let k = self.points.partition_point(|p| p.s <= s).clamp(1, n - 1) - 1;
        let (p0, p1) = (&self.points[k], &self.points[k + 1]);
        let (d0, d1) = (&self.slopes[k], &self.slopes[k + 1]);
        let h = p1.s - p0.s;
        let t = (s - p0.s) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        let g00 = (6.0 * t2 - 6.0 * t) / h;
        let g10 = 3.0 * t2 - 4.0 * t + 1.0;
        let g01 = (-6.0 * t2 + 6.0 * t) / h;
        let g11 = 3.0 * t2 - 2.0 * t;
        Ok(CurveSample {
            s,
            state: p0.state * h00 + d0.0 * (h10 * h) + p1.state * h01 + d1.0 * (h11 * h),
            sigma: p0.sigma * h00 + d0.1 * h10 * h + p1.sigma * h01 + d1.1 * h11 * h,
            dstate: p0.state * g00 + d0.0 * g10 + p1.state * g01 + d1.0 * g11,
            dsigma: p0.sigma * g00 + d0.1 * g10 + p1.sigma * g01 + d1.1 * g11,
        })
    }

    /// Exact point at `s`: closed form when the system has one, otherwise a
    /// Newton solve started from the interpolant. Derivatives come from the
    /// tangent system.
    pub fn solve_at(&self, law: &dyn ConservationLaw, s: f64) -> Result<CurveSample> {
        self.check_range(s)?;
        let s = s.min(self.s_max());
        if s == 0.0 {
            let (ds, dsig) = self.slopes[0];
            return Ok(CurveSample {
                s,
                state: self.base,
                sigma: self.points[0].sigma,
                dstate: ds,
                dsigma: dsig,
            });
        }
        let (state, sigma) = if let Some(cf) = law.shock_closed_form(&self.base, self.family, s) {
            cf
        } else {
            let guess = self.sample_at(s)?;
            let d = direction(&self.base, &guess.state)
                .ok_or_else(|| Error::Accuracy("degenerate curve interpolant".into()))?;
            let (d, sigma) = newton(law, &self.base, s, d, guess.sigma)?;
            (self.base + d * s, sigma)
        };
        if s < TANGENT_MIN_S {
            // the bordered tangent system loses sigma' as s -> 0
            let g = self.sample_at(s)?;
            return Ok(CurveSample {
                state,
                sigma,
                ..g
            });
        }
        let (dstate, dsigma) = tangent(law, &self.base, &state, sigma, s)?;
        Ok(CurveSample {
            s,
            state,
            sigma,
            dstate,
            dsigma,
        })
    }
}

const NEWTON_MAX_ITER: usize = 60;
const TANGENT_MIN_S: f64 = 1e-6;

fn direction(base: &StateVector, w: &StateVector) -> Option<StateVector> {
    let d = *w - *base;
    let n = d.norm();
    (n > 0.0 && n.is_finite()).then(|| d * (1.0 / n))
}

/// Newton iteration on `(d, sigma)` with `W = U + s d`:
/// `(A(W) - A(U))/s - sigma d = 0`, `|d|^2 = 1`.
fn newton(
    law: &dyn ConservationLaw,
    base: &StateVector,
    s: f64,
    mut d: StateVector,
    mut sigma: f64,
) -> Result<(StateVector, f64)> {
    let m = law.dim();
    let a0 = law.flux(base);
    let fail = |why: String| Error::Accuracy(format!("Rankine-Hugoniot Newton at s = {s}: {why}"));
    // g carries round-off of order eps |A| / s, so convergence is judged on
    // the undivided residual s g
    let converged = |d: &StateVector, sigma: f64| -> bool {
        let w = *base + *d * s;
        if !law.is_interior(&w) {
            return false;
        }
        let aw = law.flux(&w);
        let res = (aw - a0) - *d * (sigma * s);
        let scale = 1.0 + a0.max_abs().max(aw.max_abs());
        res.max_abs() <= 1e-13 * scale && (d.norm_sq() - 1.0).abs() <= 1e-13
    };
    for _ in 0..NEWTON_MAX_ITER {
        let w = *base + d * s;
        if !law.is_interior(&w) {
            return Err(fail(format!("iterate {w:?} left the domain")));
        }
        let g = (law.flux(&w) - a0) * (1.0 / s) - d * sigma;
        let c = d.norm_sq() - 1.0;
        let jac = law.flux_jacobian(&w)?;
        let mut mat = DMatrix::zeros(m + 1, m + 1);
        let mut rhs = DVector::zeros(m + 1);
        for i in 0..m {
            for j in 0..m {
                mat[(i, j)] = jac[(i, j)];
            }
            mat[(i, i)] -= sigma;
            mat[(i, m)] = -d[i];
            mat[(m, i)] = 2.0 * d[i];
            rhs[i] = -g[i];
        }
        rhs[m] = -c;
        let delta = solve_dense(mat, rhs).ok_or_else(|| fail("singular Jacobian".into()))?;
        let step = StateVector::from_fn(m, |i| delta[i]);
        d += step;
        sigma += delta[m];
        if !(d.is_finite() && sigma.is_finite()) {
            return Err(fail("non-finite iterate".into()));
        }
        // the step itself carries that round-off too
        let step_tol = 1e-13 + 1e-15 / s;
        if step.max_abs() <= step_tol && delta[m].abs() <= step_tol * (1.0 + sigma.abs()) {
            if converged(&d, sigma) {
                return Ok((d * (1.0 / d.norm()), sigma));
            }
            break;
        }
    }
    Err(fail("no convergence".into()))
}

/// `(W', sigma')` from `[[J - sigma I, -d], [d^T, 0]] (W', tau) = (0, 1)`,
/// `sigma' = tau / s`.
fn tangent(
    law: &dyn ConservationLaw,
    base: &StateVector,
    w: &StateVector,
    sigma: f64,
    s: f64,
) -> Result<(StateVector, f64)> {
    let m = law.dim();
    let d = *w - *base;
    let d = d * (1.0 / d.norm());
    let jac = law.flux_jacobian(w)?;
    let mut mat = DMatrix::zeros(m + 1, m + 1);
    let mut rhs = DVector::zeros(m + 1);
    for i in 0..m {
        for j in 0..m {
            mat[(i, j)] = jac[(i, j)];
        }
        mat[(i, i)] -= sigma;
        mat[(i, m)] = -d[i];
        mat[(m, i)] = d[i];
    }
    rhs[m] = 1.0;
    let x = solve_dense(mat, rhs)
        .ok_or_else(|| Error::Accuracy(format!("singular tangent system at s = {s}")))?;
    Ok((StateVector::from_fn(m, |i| x[i]), x[m] / s))
}

/// Unit right eigenvector of `grad A(U)` for the extremal eigenvalue `lambda`.
fn eigenvector(law: &dyn ConservationLaw, u: &StateVector, lambda: f64) -> Result<StateVector> {
    let m = law.dim();
    let mut jac = law.flux_jacobian(u)?;
    for i in 0..m {
        jac[(i, i)] -= lambda;
    }
    let svd = jac.svd(false, true);
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::Accuracy("singular value decomposition failed".into()))?;
    let k = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k)
        .expect("nonempty");
    let r = StateVector::from_fn(m, |i| v_t[(k, i)]);
    Ok(r * (1.0 / r.norm()))
}

/// Shock curve of `family` from `base`, `n_points` equally spaced in
/// `s in [0, s_max]`.
pub fn shock_curve(
    law: &dyn ConservationLaw,
    base: &StateVector,
    family: ShockFamily,
    s_max: f64,
    n_points: usize,
) -> Result<ShockCurve> {
    if n_points < 2 {
        return Err(Error::Config(format!("a shock curve needs at least 2 points, got {n_points}")));
    }
    if !(s_max > 0.0 && s_max.is_finite()) {
        return Err(Error::Config(format!("s_max = {s_max} must be positive")));
    }
    base.check_finite()?;
    if !law.is_interior(base) {
        return Err(Error::InvalidState(format!("curve base {base:?} is not an interior state")));
    }
    let (lm, lp) = law.extremal_eigenvalues(base)?;
    let lambda = match family {
        ShockFamily::First => lm,
        ShockFamily::Last => lp,
    };
    let h = s_max / (n_points - 1) as f64;
    let closed_form = law.shock_closed_form(base, family, h).is_some();

    let mut points = vec![ShockCurvePoint {
        s: 0.0,
        state: *base,
        sigma: lambda,
    }];
    let mut slopes: Vec<(StateVector, f64)> = Vec::with_capacity(n_points);

    if closed_form {
        for k in 1..n_points {
            let s = if k == n_points - 1 { s_max } else { k as f64 * h };
            let (state, sigma) = law
                .shock_closed_form(base, family, s)
                .expect("closed form available");
            points.push(ShockCurvePoint { s, state, sigma });
        }
        let (s0, sig0) = law.shock_closed_form(base, family, 0.0).expect("closed form");
        let e = 1e-6 * h.min(1.0);
        let (s1, sig1) = law.shock_closed_form(base, family, e).expect("closed form");
        let (s2, sig2) = law.shock_closed_form(base, family, 2.0 * e).expect("closed form");
        slopes.push((
            (s1 * 4.0 - s0 * 3.0 - s2) * (0.5 / e),
            (4.0 * sig1 - 3.0 * sig0 - sig2) / (2.0 * e),
        ));
        for p in &points[1..] {
            slopes.push(tangent(law, base, &p.state, p.sigma, p.s)?);
        }
        return Ok(ShockCurve {
            base: *base,
            family,
            points,
            slopes,
            closed_form,
        });
    }

    let r = eigenvector(law, base, lambda)?;
    let prefer = |a: f64, b: f64| match family {
        ShockFamily::First => a < b,
        ShockFamily::Last => a > b,
    };

    // current position on the curve: (s, d, sigma, W', sigma')
    let mut cur_s = 0.0;
    let mut cur_d = r;
    let mut cur_sigma = lambda;
    let mut cur_slope: Option<(StateVector, f64)> = None;

    for k in 1..n_points {
        let target = if k == n_points - 1 { s_max } else { k as f64 * h };
        let mut halvings = 0;
        while cur_s < target {
            let ds = (target - cur_s) / f64::powi(2.0, halvings);
            let s_new = if halvings == 0 { target } else { cur_s + ds };
            let attempt = match cur_slope {
                None => {
                    // first step: follow both eigen-directions, keep the
                    // branch whose speed moves the admissible way
                    let a = newton(law, base, s_new, r, lambda);
                    let b = newton(law, base, s_new, -r, lambda);
                    match (a, b) {
                        (Ok(x), Ok(y)) => Ok(if prefer(x.1, y.1) { x } else { y }),
                        (Ok(x), Err(_)) | (Err(_), Ok(x)) => Ok(x),
                        (Err(e), Err(_)) => Err(e),
                    }
                }
                Some((dw, dsig)) => {
                    let w_prev = *base + cur_d * cur_s;
                    let pred = w_prev + dw * (s_new - cur_s);
                    let d0 = direction(base, &pred).unwrap_or(cur_d);
                    newton(law, base, s_new, d0, cur_sigma + dsig * (s_new - cur_s))
                }
            };
            match attempt {
                Ok((d, sigma)) => {
                    let w = *base + d * s_new;
                    let slope = tangent(law, base, &w, sigma, s_new).map_err(|e| {
                        Error::CurveContinuation {
                            last_good_s: cur_s,
                            reason: e.to_string(),
                        }
                    })?;
                    cur_s = s_new;
                    cur_d = d;
                    cur_sigma = sigma;
                    cur_slope = Some(slope);
                    halvings = 0;
                }
                Err(e) => {
                    halvings += 1;
                    if halvings > 12 {
                        return Err(Error::CurveContinuation {
                            last_good_s: cur_s,
                            reason: e.to_string(),
                        });
                    }
                }
            }
        }
        points.push(ShockCurvePoint {
            s: target,
            state: *base + cur_d * target,
            sigma: cur_sigma,
        });
        slopes.push(cur_slope.expect("at least one step taken"));
    }

    // slope at s = 0: the eigenvector on the chosen branch, sigma' one-sided
    let d1 = direction(base, &points[1].state).unwrap_or(r);
    let r0 = if r.dot(&d1) >= 0.0 { r } else { -r };
    let sig_slope0 = if n_points >= 3 {
        let (s1, s2) = (points[1].s, points[2].s);
        let (f0, f1, f2) = (points[0].sigma, points[1].sigma, points[2].sigma);
        // derivative at 0 of the quadratic through the first three points
        (f1 - f0) / s1 * (s2 / (s2 - s1)) - (f2 - f0) / s2 * (s1 / (s2 - s1))
    } else {
        (points[1].sigma - points[0].sigma) / points[1].s
    };
    slopes.insert(0, (r0, sig_slope0));
    Ok(ShockCurve {
        base: *base,
        family,
        points,
        slopes,
        closed_form,
    })
}

/// Margins of the Liu condition and the strengthening condition at each
/// curve point. Both margins must be positive at interior points.
#[derive(Debug, Clone, Serialize)]
pub struct LiuReport {
    /// `-sigma'` for the 1-family, `sigma'` for the n-family.
    pub liu_margins: Vec<f64>,
    /// `d/ds eta(U | S_U(s))`.
    pub strengthen_margins: Vec<f64>,
    pub min_liu_margin: f64,
    pub min_strengthen_margin: f64,
    pub liu_pass: bool,
    pub strengthen_pass: bool,
}

impl LiuReport {
    pub fn pass(&self) -> bool {
        self.liu_pass && self.strengthen_pass
    }
}

/// Centered differences on the samples (one-sided at the ends); the verdict
/// uses interior samples only.
pub fn liu_strengthen_check(law: &dyn ConservationLaw, curve: &ShockCurve) -> Result<LiuReport> {
    let n = curve.points.len();
    if n < 3 {
        return Err(Error::Config(format!("Liu audit needs at least 3 curve points, got {n}")));
    }
    let strength = curve
        .points
        .iter()
        .map(|p| Ok(Reference::new(law, &p.state)?.rel_entropy(law, &curve.base)))
        .collect::<Result<Vec<f64>>>()?;
    let sign = curve.family.speed_sign();
    let diff = |v: &dyn Fn(usize) -> f64, k: usize| {
        let (lo, hi) = (k.saturating_sub(1), (k + 1).min(n - 1));
        (v(hi) - v(lo)) / (curve.points[hi].s - curve.points[lo].s)
    };
    let sig = |k: usize| curve.points[k].sigma;
    let eta = |k: usize| strength[k];
    let liu_margins: Vec<f64> = (0..n).map(|k| sign * diff(&sig, k)).collect();
    let strengthen_margins: Vec<f64> = (0..n).map(|k| diff(&eta, k)).collect();
    let min_liu_margin = liu_margins[1..n - 1].iter().copied().fold(f64::INFINITY, f64::min);
    let min_strengthen_margin = strengthen_margins[1..n - 1]
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    Ok(LiuReport {
        liu_pass: min_liu_margin > 0.0,
        strengthen_pass: min_strengthen_margin > 0.0,
        liu_margins,
        strengthen_margins,
        min_liu_margin,
        min_strengthen_margin,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityGap {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

const IDENTITY_QUAD_TOL: f64 = 1e-12;

/// `F(S(s), V) - sigma(s) eta(S(s)|V)` against
/// `F(U, V) - sigma(s) eta(U|V) + int_0^s sigma'(t) eta(U|S(t)) dt`
/// along a 1-shock curve.
pub fn lax_dissipation_identity(
    law: &dyn ConservationLaw,
    curve: &ShockCurve,
    s: f64,
    v: &StateVector,
) -> Result<IdentityGap> {
    let refv = Reference::new(law, v)?;
    let end = curve.solve_at(law, s)?;
    let base = curve.base;
    let sigma = end.sigma;
    let lhs = refv.rel_flux(law, &end.state) - sigma * refv.rel_entropy(law, &end.state);
    let mut err = None;
    let integral = integrate(
        |t| match curve.solve_at(law, t).and_then(|p| {
            Ok(p.dsigma * Reference::new(law, &p.state)?.rel_entropy(law, &base))
        }) {
            Ok(val) => val,
            Err(e) => {
                err.get_or_insert(e);
                f64::NAN
            }
        },
        0.0,
        s,
        IDENTITY_QUAD_TOL,
    );
    if let Some(e) = err {
        return Err(e);
    }
    let rhs = refv.rel_flux(law, &base) - sigma * refv.rel_entropy(law, &base) + integral?;
    Ok(IdentityGap {
        lhs,
        rhs,
        gap: lhs - rhs,
    })
}

/// Inequality form for an arbitrary admissible discontinuity:
/// `F(U+, V) - sigma eta(U+|V) <= F(U-, V) - sigma eta(U-|V)`.
/// Returns `(lhs, rhs)`.
pub fn lax_dissipation_inequality(
    law: &dyn ConservationLaw,
    t: &ShockTriple,
    v: &StateVector,
) -> Result<(f64, f64)> {
    let refv = Reference::new(law, v)?;
    let side = |u: &StateVector| refv.rel_flux(law, u) - t.sigma * refv.rel_entropy(law, u);
    Ok((side(&t.right), side(&t.left)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DipernaDissipation {
    /// `F(S(s), S(s0)) - sigma(s) eta(S(s)|S(s0))`.
    pub d: f64,
    /// `int_{s0}^s sigma'(t) (eta(U|S(t)) - eta(U|S(s0))) dt`.
    pub d_integral: f64,
    /// `sigma(s) - sigma(s0)`.
    pub dsigma: f64,
}

pub fn diperna_dissipation(
    law: &dyn ConservationLaw,
    curve: &ShockCurve,
    s: f64,
    s0: f64,
) -> Result<DipernaDissipation> {
    let p0 = curve.solve_at(law, s0)?;
    let p = curve.solve_at(law, s)?;
    let r0 = Reference::new(law, &p0.state)?;
    let d = r0.rel_flux(law, &p.state) - p.sigma * r0.rel_entropy(law, &p.state);
    let base = curve.base;
    let eta0 = r0.rel_entropy(law, &base);
    let mut err = None;
    let integral = integrate(
        |t| match curve.solve_at(law, t).and_then(|q| {
            Ok(q.dsigma * (Reference::new(law, &q.state)?.rel_entropy(law, &base) - eta0))
        }) {
            Ok(val) => val,
            Err(e) => {
                err.get_or_insert(e);
                f64::NAN
            }
        },
        s0,
        s,
        IDENTITY_QUAD_TOL,
    );
    if let Some(e) = err {
        return Err(e);
    }
    Ok(DipernaDissipation {
        d,
        d_integral: integral?,
        dsigma: p.sigma - p0.sigma,
    })
}

/// Sampled constants of the two dissipation regimes:
/// `D <= -kappa |dsigma|^2` for `|s - s0| <= delta` and
/// `D <= -kappa |dsigma|` beyond.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaDelta {
    pub kappa: f64,
    pub delta: f64,
    pub samples: usize,
    /// Largest `D` seen; must not be positive.
    pub max_d: f64,
}

/// Sweep `s` over `n` points of `[s_lo, s_hi]` (excluding `s0`) and return
/// the `(kappa, delta)` pair with the largest `kappa` among candidate
/// `delta` values.
pub fn estimate_kappa_delta(
    law: &dyn ConservationLaw,
    curve: &ShockCurve,
    s0: f64,
    s_lo: f64,
    s_hi: f64,
    n: usize,
) -> Result<KappaDelta> {
    curve.check_range(s0)?;
    let s_lo = s_lo.max(0.0);
    let s_hi = s_hi.min(curve.s_max());
    if !(s_hi > s_lo) || n < 2 {
        return Err(Error::Config("empty sweep for kappa estimation".into()));
    }
    let p0 = curve.solve_at(law, s0)?;
    let r0 = Reference::new(law, &p0.state)?;
    let mut rows = Vec::with_capacity(n);
    for k in 0..n {
        let s = s_lo + (s_hi - s_lo) * k as f64 / (n - 1) as f64;
        if (s - s0).abs() < 1e-12 * (1.0 + s0) {
            continue;
        }
        let p = curve.solve_at(law, s)?;
        let d = r0.rel_flux(law, &p.state) - p.sigma * r0.rel_entropy(law, &p.state);
        rows.push(((s - s0).abs(), d, (p.sigma - p0.sigma).abs()));
    }
    if rows.is_empty() {
        return Err(Error::Config("kappa sweep has no usable samples".into()));
    }
    let max_d = rows.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    let width = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let mut best = KappaDelta {
        kappa: f64::NEG_INFINITY,
        delta: 0.0,
        samples: rows.len(),
        max_d,
    };
    for j in 1..=16 {
        let delta = width * j as f64 / 16.0;
        let kappa = rows
            .iter()
            .filter(|r| r.2 > 0.0)
            .map(|&(dist, d, ds)| if dist <= delta { -d / (ds * ds) } else { -d / ds })
            .fold(f64::INFINITY, f64::min);
        if kappa > best.kappa {
            best.kappa = kappa;
            best.delta = delta;
        }
    }
    Ok(best)
}
