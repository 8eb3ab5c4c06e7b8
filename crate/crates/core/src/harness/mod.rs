//! Scenario files, run orchestration, the verification suite and the CLI
//! entry points.

mod config;
mod prop14;
mod run;
mod verify;

pub use config::{
    ConstantsSpec, CurveShock, DriftSpec, EndpointShock, GridSpec, MonitorSpec, OutputSpec, ScenarioConfig,
    ShockSpec, SolverSpec,
};
pub use prop14::{prop14_experiment, Prop14Report};
pub use run::{run_box, run_scenario, series_csv, RunRecord, Simulation, CSV_HEADER};
pub use verify::{verify_suite, verify_systems, SuiteItem, SuiteReport, SuiteSystem};
