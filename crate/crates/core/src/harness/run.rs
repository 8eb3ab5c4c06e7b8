use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::config::ScenarioConfig;
use crate::constants::{velocity_bound, ContractionConfig, ShiftVelocity};
use crate::drift::{advance_drift, filippov_velocity, interface_traces, TracePair};
use crate::error::{Error, Result};
use crate::field::FieldSnapshot;
use crate::monitor::{
    contraction_verdict, dissipation_rate, dissipation_summary, drift_bound_check, l2_stability_check,
    RunSeries, Verdicts,
};
use crate::relent::{comparability_constants, l2_distance_to_step, pseudo_norm_with, Comparability};
use crate::solver::{initial_data, stable_dt, step_with_dt, InitialProfile, SolverConfig};
use crate::systems::{ConservationLaw, DomainBox};

pub const CSV_HEADER: &str = "t,Ea,l2_dist,x,xdot,vmin,vmax,Dt";

/// Everything a run produces.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub scenario_hash: String,
    pub constants: ContractionConfig,
    pub series: RunSeries,
    pub verdicts: Verdicts,
    pub u0_distance: f64,
    pub comparability: Comparability,
    /// Sampled `max |V|` over the box of run values.
    pub velocity_bound: f64,
    pub dx: f64,
    pub steps: usize,
    pub wall_seconds: f64,
}

impl RunRecord {
    pub fn pass(&self) -> bool {
        self.verdicts.pass()
    }
}

/// Solver, drift and monitor advanced in lockstep.
pub struct Simulation {
    pub law: Arc<dyn ConservationLaw>,
    pub constants: ContractionConfig,
    pub velocity: ShiftVelocity,
    pub solver: SolverConfig,
    pub field: FieldSnapshot,
    pub x: f64,
    pub window_h: f64,
    pub stencil_skip: usize,
    pub series: RunSeries,
    pub traces: Vec<TracePair>,
    pub steps: usize,
}

impl Simulation {
    pub fn new(cfg: &ScenarioConfig) -> Result<Self> {
        cfg.validate()?;
        let law = cfg.system.build()?;
        let shock = cfg.shock.resolve(&*law)?;
        let constants =
            ContractionConfig::construct(&*law, &shock, &cfg.constants.search, &cfg.constants.overrides())?;
        Self::with_constants(cfg, law, constants)
    }

    /// Skips the constant search.
    pub fn with_constants(
        cfg: &ScenarioConfig,
        law: Arc<dyn ConservationLaw>,
        constants: ContractionConfig,
    ) -> Result<Self> {
        let grid = cfg.grid.build()?;
        let shock = constants.shock;
        let field = initial_data(&*law, &cfg.initial, shock.left, shock.right, &grid)?;
        Ok(Self {
            velocity: constants.references(&*law)?,
            solver: cfg.solver.build(&shock)?,
            window_h: cfg.drift.window_cells * grid.dx(),
            stencil_skip: cfg.drift.stencil_skip,
            series: RunSeries::new(shock.sigma),
            traces: Vec::new(),
            field,
            x: 0.0,
            steps: 0,
            law,
            constants,
        })
    }

    pub fn done(&self) -> bool {
        self.field.time >= self.solver.t_end
    }

    fn record(&mut self, tr: TracePair, xdot: f64, vmin: f64, vmax: f64) -> Result<()> {
        let law = &*self.law;
        let sv = &self.velocity;
        let ea = pseudo_norm_with(law, &self.field, &sv.left, &sv.right, sv.a, self.x)?;
        let l2 = l2_distance_to_step(&self.field, self.x, &sv.left.state, &sv.right.state)?;
        let d = dissipation_rate(law, sv, &tr, xdot);
        self.series.push(self.field.time, ea, l2, self.x, xdot, vmin, vmax, d);
        self.traces.push(tr);
        Ok(())
    }

    /// One solver step plus the matching drift step; the row recorded is
    /// for the start of the step.
    pub fn advance(&mut self) -> Result<()> {
        let law = &*self.law;
        let tr = interface_traces(&self.field, self.x, self.stencil_skip)?;
        let dt = stable_dt(law, &self.field, &self.solver)?;
        if !(dt > 0.0) {
            return Err(Error::Integration(format!("zero time step at t = {}", self.field.time)));
        }
        let next = step_with_dt(law, &self.field, &self.solver, dt)?;
        let st = advance_drift(law, &self.velocity, &self.field, &next, self.x, dt, self.window_h)?;
        self.record(tr, st.xdot, st.vmin, st.vmax)?;
        self.field = next;
        self.x = st.x_new;
        self.steps += 1;
        Ok(())
    }

    /// Final row at `t_end`, with the single-stage window velocity.
    pub fn finish(&mut self) -> Result<()> {
        let tr = interface_traces(&self.field, self.x, self.stencil_skip)?;
        let w = filippov_velocity(&*self.law, &self.velocity, &self.field, self.x, self.window_h)?;
        self.record(tr, w.mean, w.vmin, w.vmax)
    }

    pub fn run(&mut self) -> Result<()> {
        while !self.done() {
            self.advance()?;
        }
        self.finish()
    }
}

/// Physical-variable box spanned by the initial field and both references,
/// widened by 10% of its extent on each side.
pub fn run_box(law: &dyn ConservationLaw, field: &FieldSnapshot, sim: &ContractionConfig) -> Result<DomainBox> {
    let mut lo = law.to_physical(sim.u_l());
    let mut hi = lo.clone();
    for u in field.cells.iter().chain([sim.u_r()]) {
        for (k, p) in law.to_physical(u).into_iter().enumerate() {
            lo[k] = lo[k].min(p);
            hi[k] = hi[k].max(p);
        }
    }
    let bounds = lo
        .iter()
        .zip(&hi)
        .map(|(a, b)| {
            let pad = 0.1 * (b - a) + 1e-3 * (1.0 + a.abs().max(b.abs()));
            (a - pad, b + pad)
        })
        .collect();
    DomainBox::new(bounds)
}

/// Series CSV with round-trip decimal reals.
pub fn series_csv(series: &RunSeries) -> String {
    let mut out = String::with_capacity(64 * series.len() + 64);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for k in 0..series.len() {
        let _ = writeln!(
            out,
            "{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?}",
            series.times[k],
            series.ea[k],
            series.l2_dist[k],
            series.x[k],
            series.xdot[k],
            series.vmin[k],
            series.vmax[k],
            series.dissipation[k]
        );
    }
    out
}

fn snapshot_csv(law: &dyn ConservationLaw, field: &FieldSnapshot) -> String {
    let mut out = String::from("x");
    for k in 0..law.dim() {
        let _ = write!(out, ",u{k}");
    }
    out.push('\n');
    for (i, c) in field.cells.iter().enumerate() {
        let _ = write!(out, "{:?}", field.grid.center(i));
        for v in c.as_slice() {
            let _ = write!(out, ",{v:?}");
        }
        out.push('\n');
    }
    out
}

fn write_file(dir: &Path, name: &str, body: &str) -> Result<()> {
    fs::write(dir.join(name), body).map_err(Error::from)
}

/// Run a scenario, write its outputs when a directory is configured, and
/// evaluate the verdicts. A failing time loop still writes the partial series.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunRecord> {
    let started = Instant::now();
    let dir = cfg.output.dir.clone();
    if let Some(d) = &dir {
        fs::create_dir_all(d)?;
    }
    let mut sim = Simulation::new(cfg)?;
    let law = sim.law.clone();
    let profile = InitialProfile::new(&*law, &cfg.initial, *sim.constants.u_l(), *sim.constants.u_r())?;
    let u0_distance = profile.distance_sq_to_step(&sim.field.grid)?.sqrt();
    let domain = run_box(&*law, &sim.field, &sim.constants)?;
    let samples = cfg.monitor.comparability_samples;
    let comparability = comparability_constants(
        &*law,
        &[*sim.constants.u_l(), *sim.constants.u_r()],
        &domain,
        samples,
        cfg.seed,
    )?;
    let vbound = velocity_bound(&*law, &sim.constants, &domain, samples, cfg.seed)?;
    if let Some(d) = &dir {
        write_file(d, "constants.json", &serde_json::to_string_pretty(&sim.constants)?)?;
    }

    let snap_every = cfg.output.snapshot_every;
    let mut looped = || -> Result<()> {
        while !sim.done() {
            if let (Some(d), Some(n)) = (&dir, snap_every) {
                if sim.steps % n == 0 {
                    write_file(d, &format!("snap_{}.csv", sim.steps), &snapshot_csv(&*law, &sim.field))?;
                }
            }
            sim.advance()?;
        }
        sim.finish()
    };
    let outcome = looped();
    if let Some(d) = &dir {
        write_file(d, "series.csv", &series_csv(&sim.series))?;
    }
    outcome?;

    let dx = sim.field.grid.dx();
    let t_end = cfg.solver.t_end;
    let c_tol = cfg.monitor.c_tol;
    let budget = c_tol * dx * (1.0 + t_end);
    let d_tol = cfg.monitor.dissipation_tol.unwrap_or(c_tol * dx);
    let verdicts = Verdicts {
        contraction: contraction_verdict(&sim.series, dx, t_end, c_tol)?,
        drift_bound: drift_bound_check(&sim.series, u0_distance, dx),
        l2: l2_stability_check(
            &sim.series,
            u0_distance,
            comparability.c1,
            comparability.c2,
            sim.constants.a,
            budget,
        ),
        dissipation: dissipation_summary(&sim.series.dissipation, d_tol),
        sandwich_violations: sim.series.sandwich_violations(1e-8),
    };
    if let Some(d) = &dir {
        write_file(d, "verdicts.json", &serde_json::to_string_pretty(&verdicts)?)?;
    }
    Ok(RunRecord {
        scenario_hash: cfg.hash(),
        constants: sim.constants,
        series: sim.series,
        verdicts,
        u0_distance,
        comparability,
        velocity_bound: vbound,
        dx,
        steps: sim.steps,
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}
