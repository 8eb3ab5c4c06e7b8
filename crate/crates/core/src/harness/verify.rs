use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{ContractionConfig, SearchGrid};
use crate::error::Result;
use crate::hugoniot::{
    diperna_dissipation, lax_dissipation_identity, liu_strengthen_check, rh_residual, shock_curve, ShockTriple,
    RH_TOL,
};
use crate::relent::comparability_constants;
use crate::state::StateVector;
use crate::systems::{
    compatibility_check, entropy_hessian_min_eigenvalue, Burgers, ConservationLaw, DomainBox, FullEuler,
    IsentropicEuler, PowerLaw, Reflected, ShockFamily,
};

/// A system with the pinned parameters of its audits.
#[derive(Clone)]
pub struct SuiteSystem {
    pub label: String,
    pub law: Arc<dyn ConservationLaw>,
    pub reflected: Arc<dyn ConservationLaw>,
    pub base: StateVector,
    pub s_max: f64,
    /// Curve parameter of the reference shock used for the constants.
    pub s_shock: f64,
    pub domain: DomainBox,
}

impl SuiteSystem {
    pub fn new<L: ConservationLaw + Clone + 'static>(
        label: &str,
        law: L,
        base: StateVector,
        s_max: f64,
        s_shock: f64,
        domain: DomainBox,
    ) -> Self {
        Self {
            label: label.to_string(),
            reflected: Arc::new(Reflected(law.clone())),
            law: Arc::new(law),
            base,
            s_max,
            s_shock,
            domain,
        }
    }

    /// Burgers at `u = 1`, isentropic `P = rho^2` at `(1, 0)` and full Euler
    /// with `gamma = 1.4` at `rho = 1, u = 0, e = 1`.
    pub fn builtin() -> Vec<Self> {
        let eu = FullEuler::new(1.4).expect("valid gamma");
        let eu_base = eu.from_physical(&[1.0, 0.0, 1.0]);
        vec![
            Self::new(
                "burgers",
                Burgers,
                StateVector::scalar(1.0),
                2.0,
                2.0,
                DomainBox::new(vec![(-3.0, 3.0)]).expect("box"),
            ),
            Self::new(
                "isentropic",
                IsentropicEuler::new(Arc::new(PowerLaw::new(1.0, 2.0).expect("valid law"))),
                StateVector::new(&[1.0, 0.0]),
                1.0,
                0.5,
                DomainBox::new(vec![(0.2, 3.0), (-2.0, 2.0)]).expect("box"),
            ),
            Self::new(
                "euler",
                eu,
                eu_base,
                1.0,
                0.5,
                DomainBox::new(vec![(0.1, 3.0), (-2.0, 2.0), (0.1, 3.0)]).expect("box"),
            ),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteItem {
    pub system: String,
    pub item: String,
    pub pass: bool,
    /// Signed margin or residual backing the verdict.
    pub value: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub items: Vec<SuiteItem>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn item(&self, system: &str, item: &str) -> Option<&SuiteItem> {
        self.items.iter().find(|i| i.system == system && i.item == item)
    }

    /// `(system, item, pass)` triples, for comparing runs.
    pub fn pattern(&self) -> Vec<(String, String, bool)> {
        self.items.iter().map(|i| (i.system.clone(), i.item.clone(), i.pass)).collect()
    }
}

pub const ITEMS: [&str; 9] = [
    "compatibility",
    "convexity",
    "comparability",
    "rankine_hugoniot",
    "liu_strengthening",
    "lax_identity",
    "diperna",
    "reflection",
    "constants",
];

const SAMPLES: usize = 400;
const CURVE_POINTS: usize = 81;

fn item(sys: &SuiteSystem, name: &str, r: Result<(bool, f64, String)>) -> SuiteItem {
    let (pass, value, detail) = r.unwrap_or_else(|e| (false, f64::NAN, format!("error: {e}")));
    SuiteItem {
        system: sys.label.clone(),
        item: name.to_string(),
        pass,
        value,
        detail,
    }
}

fn run_item(sys: &SuiteSystem, name: &str, seed: u64) -> Result<(bool, f64, String)> {
    let law = &*sys.law;
    let samples = || {
        sys.domain
            .sample(law, SAMPLES, seed)
            .into_iter()
            .filter(|u| law.is_interior(u))
            .collect::<Vec<_>>()
    };
    let curve = || shock_curve(law, &sys.base, ShockFamily::First, sys.s_max, CURVE_POINTS);
    match name {
        "compatibility" => {
            let r = compatibility_check(law, &samples())?;
            Ok((r.pass, r.max_residual, format!("threshold {:e}", r.threshold)))
        }
        "convexity" => {
            let mut worst = f64::INFINITY;
            for u in samples() {
                worst = worst.min(entropy_hessian_min_eigenvalue(law, &u)?);
            }
            Ok((worst > 0.0, worst, "smallest Hessian eigenvalue".into()))
        }
        "comparability" => {
            let c = comparability_constants(law, &[sys.base], &sys.domain, 4 * SAMPLES, seed)?;
            let mut ok = c.c1 > 0.0 && c.c1 <= c.c2;
            if sys.label == "burgers" {
                ok &= (c.c1 - 0.5).abs() < 1e-12 && (c.c2 - 0.5).abs() < 1e-12;
            }
            Ok((ok, c.c1, format!("C1 = {:e}, C2 = {:e}", c.c1, c.c2)))
        }
        "rankine_hugoniot" => {
            let c = curve()?;
            let mut worst = 0.0f64;
            let mut produced = f64::NEG_INFINITY;
            for k in 0..c.points.len() {
                let t = c.triple(k);
                let r = rh_residual(law, &t.left, &t.right, t.sigma)?;
                worst = worst.max(r.scaled);
                produced = produced.max(r.entropy_production);
            }
            Ok((
                worst < RH_TOL && produced <= RH_TOL,
                worst,
                format!("largest entropy production {produced:e}"),
            ))
        }
        "liu_strengthening" => {
            let r = liu_strengthen_check(law, &curve()?)?;
            Ok((
                r.pass(),
                r.min_liu_margin.min(r.min_strengthen_margin),
                format!("liu {:e}, strengthening {:e}", r.min_liu_margin, r.min_strengthen_margin),
            ))
        }
        "lax_identity" => {
            let c = curve()?;
            let s = 0.5 * sys.s_max;
            let p = c.solve_at(law, s)?;
            let v = (sys.base + p.state) * 0.5;
            let g = lax_dissipation_identity(law, &c, s, &v)?;
            let tol = if c.is_closed_form() { 1e-8 } else { 1e-6 };
            Ok((g.gap.abs() < tol, g.gap, format!("lhs {:e}, rhs {:e}", g.lhs, g.rhs)))
        }
        "diperna" => {
            let c = curve()?;
            let s0 = sys.s_max;
            let mut worst = f64::NEG_INFINITY;
            let mut gap = 0.0f64;
            for k in 1..8 {
                let s = s0 * k as f64 / 8.0;
                let d = diperna_dissipation(law, &c, s, s0)?;
                worst = worst.max(d.d);
                gap = gap.max((d.d - d.d_integral).abs());
            }
            let mut ok = worst < 0.0 && gap < 1e-8;
            if sys.label == "burgers" {
                let d = diperna_dissipation(law, &c, 1.0, 2.0)?;
                ok &= (d.d + 5.0 / 6.0).abs() < 1e-10 && (d.d_integral + 5.0 / 6.0).abs() < 1e-10;
            }
            Ok((ok, worst, format!("largest gap between the two forms {gap:e}")))
        }
        "reflection" => {
            let refl = &*sys.reflected;
            let rc = shock_curve(refl, &sys.base, ShockFamily::First, sys.s_max, CURVE_POINTS)?;
            let nc = shock_curve(law, &sys.base, ShockFamily::Last, sys.s_max, CURVE_POINTS)?;
            let (mut worst, mut mismatch) = (0.0f64, 0.0f64);
            for (p, q) in rc.points.iter().zip(&nc.points) {
                let r = rh_residual(law, &p.state, &sys.base, -p.sigma)?;
                worst = worst.max(r.scaled);
                mismatch = mismatch.max((p.state - q.state).max_abs()).max((p.sigma + q.sigma).abs());
            }
            Ok((
                worst < RH_TOL && mismatch < 1e-8,
                worst,
                format!("largest mismatch with the direct n-curve {mismatch:e}"),
            ))
        }
        "constants" => {
            let c = curve()?;
            let p = c.solve_at(law, sys.s_shock)?;
            let shock = ShockTriple::new(law, sys.base, p.state, p.sigma)?;
            let grid = SearchGrid {
                seed,
                ..SearchGrid::default()
            };
            let cfg = ContractionConfig::construct(law, &shock, &grid, &Default::default())?;
            let audit = cfg.audit_invariants(law, 3000, seed.wrapping_add(7))?;
            Ok((
                audit.pass(),
                cfg.a,
                format!("v = {}, C0 = {:e}, a = {:e}, oa radius {:e}", cfg.v, cfg.c0, cfg.a, audit.oa_radius),
            ))
        }
        other => unreachable!("unknown suite item {other}"),
    }
}

/// Every audit for the given systems; failures become report entries.
pub fn verify_systems(systems: &[SuiteSystem], seed: u64) -> SuiteReport {
    let jobs: Vec<(usize, &str)> = (0..systems.len())
        .flat_map(|k| ITEMS.iter().map(move |n| (k, *n)))
        .collect();
    let items = jobs
        .par_iter()
        .map(|(k, n)| item(&systems[*k], n, run_item(&systems[*k], n, seed)))
        .collect();
    SuiteReport { seed, items }
}

/// [`verify_systems`] on the built-in systems.
pub fn verify_suite(seed: u64) -> SuiteReport {
    verify_systems(&SuiteSystem::builtin(), seed)
}
