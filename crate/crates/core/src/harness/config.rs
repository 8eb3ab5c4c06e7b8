use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::constants::{ConstantsOverride, SearchGrid};
use crate::error::{Error, Result};
use crate::field::Grid1D;
use crate::hugoniot::{shock_curve, ShockTriple};
use crate::solver::{InitialData, SolverConfig};
use crate::state::StateVector;
use crate::systems::{ConservationLaw, FluxScheme, ShockFamily, SystemSpec};

/// A reference 1-shock, either by its endpoints or as the point at
/// parameter `s` on the 1-shock curve from `base`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ShockSpec {
    Endpoints(EndpointShock),
    Curve(CurveShock),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndpointShock {
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    /// Least-squares speed when absent.
    #[serde(default)]
    pub sigma: Option<f64>,
    /// States are given as physical variables instead of conserved ones.
    #[serde(default)]
    pub physical: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveShock {
    pub base: Vec<f64>,
    pub s: f64,
    #[serde(default)]
    pub physical: bool,
}

fn state_of(law: &dyn ConservationLaw, v: &[f64], physical: bool) -> Result<StateVector> {
    if v.len() != law.dim() {
        return Err(Error::Config(format!(
            "state {v:?} has {} components, system {} has {}",
            v.len(),
            law.name(),
            law.dim()
        )));
    }
    let u = if physical {
        law.from_physical(v)
    } else {
        StateVector::try_new(v)?
    };
    if !law.is_interior(&u) {
        return Err(Error::Config(format!("state {v:?} is not an interior state")));
    }
    Ok(u)
}

const CURVE_POINTS: usize = 41;

impl ShockSpec {
    /// The triple, checked against the Rankine–Hugoniot relation.
    pub fn resolve(&self, law: &dyn ConservationLaw) -> Result<ShockTriple> {
        match self {
            ShockSpec::Endpoints(e) => {
                let l = state_of(law, &e.left, e.physical)?;
                let r = state_of(law, &e.right, e.physical)?;
                match e.sigma {
                    Some(sigma) => ShockTriple::new(law, l, r, sigma),
                    None => ShockTriple::from_states(law, l, r),
                }
            }
            ShockSpec::Curve(c) => {
                let base = state_of(law, &c.base, c.physical)?;
                if !(c.s > 0.0 && c.s.is_finite()) {
                    return Err(Error::Config(format!("curve parameter s = {} must be positive", c.s)));
                }
                let curve = shock_curve(law, &base, ShockFamily::First, c.s, CURVE_POINTS)?;
                let p = curve.solve_at(law, c.s)?;
                ShockTriple::new(law, base, p.state, p.sigma)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
}

impl GridSpec {
    pub fn build(&self) -> Result<Grid1D> {
        Grid1D::new(self.x_min, self.x_max, self.n_cells)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default)]
    pub scheme: Option<FluxScheme>,
    pub t_end: f64,
}

fn default_cfl() -> f64 {
    0.45
}

impl SolverSpec {
    pub fn build(&self, shock: &ShockTriple) -> Result<SolverConfig> {
        let mut c = SolverConfig::far_field(shock.left, shock.right, self.t_end);
        c.cfl = self.cfl;
        c.scheme = self.scheme;
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsSpec {
    #[serde(default)]
    pub v: Option<f64>,
    #[serde(default)]
    pub a: Option<f64>,
    #[serde(default)]
    pub search: SearchGrid,
}

impl ConstantsSpec {
    pub fn overrides(&self) -> ConstantsOverride {
        ConstantsOverride { v: self.v, a: self.a }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriftSpec {
    /// Width of the velocity window in cells.
    #[serde(default = "default_window")]
    pub window_cells: f64,
    #[serde(default = "default_skip")]
    pub stencil_skip: usize,
}

fn default_window() -> f64 {
    4.0
}

fn default_skip() -> usize {
    2
}

impl Default for DriftSpec {
    fn default() -> Self {
        Self {
            window_cells: default_window(),
            stencil_skip: default_skip(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonitorSpec {
    #[serde(default = "default_c_tol")]
    pub c_tol: f64,
    /// Threshold on `D_t` above which a step counts as a dissipation
    /// violation; `c_tol dx` when absent.
    #[serde(default)]
    pub dissipation_tol: Option<f64>,
    #[serde(default = "default_samples")]
    pub comparability_samples: usize,
}

fn default_c_tol() -> f64 {
    crate::monitor::DEFAULT_C_TOL
}

fn default_samples() -> usize {
    4000
}

impl Default for MonitorSpec {
    fn default() -> Self {
        Self {
            c_tol: default_c_tol(),
            dissipation_tol: None,
            comparability_samples: default_samples(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub dir: Option<PathBuf>,
    /// Write `snap_<step>.csv` every this many steps.
    #[serde(default)]
    pub snapshot_every: Option<usize>,
}

/// A complete experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub name: String,
    pub system: SystemSpec,
    pub shock: ShockSpec,
    pub grid: GridSpec,
    pub solver: SolverSpec,
    pub initial: InitialData,
    #[serde(default)]
    pub constants: ConstantsSpec,
    #[serde(default)]
    pub drift: DriftSpec,
    #[serde(default)]
    pub monitor: MonitorSpec,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub seed: u64,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("scenario: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Static checks that need no numerics.
    pub fn validate(&self) -> Result<()> {
        self.grid.build()?;
        if !(self.drift.window_cells > 0.0) {
            return Err(Error::Config("drift window must be positive".into()));
        }
        if !(self.monitor.c_tol > 0.0 && self.monitor.dissipation_tol.is_none_or(|d| d >= 0.0)) {
            return Err(Error::Config("monitor tolerances must be positive".into()));
        }
        if self.output.snapshot_every == Some(0) {
            return Err(Error::Config("snapshot_every must be at least 1".into()));
        }
        self.constants.search.validate()?;
        Ok(())
    }

    /// SHA-256 of the canonical JSON form, output directory excluded.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output.dir = None;
        let bytes = serde_json::to_vec(&c).expect("scenario serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }
}
