use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use shocklab::constants::ContractionConfig;
use shocklab::harness::{prop14_experiment, run_scenario, verify_suite, ScenarioConfig};
use shocklab::hugoniot::shock_curve;
use shocklab::systems::{ShockFamily, SystemSpec};
use shocklab::{Error, Result, StateVector};

#[derive(Parser)]
#[command(name = "shocklab", version, about = "Relative-entropy shock contraction experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    #[value(name = "1")]
    First,
    #[value(name = "n")]
    Last,
}

#[derive(Subcommand)]
enum Command {
    /// Construct v, C0, epsilon and a for the scenario's shock.
    Constants {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Sample a shock curve as CSV.
    Curve {
        #[arg(long)]
        system: String,
        #[arg(long)]
        gamma: Option<f64>,
        /// Comma-separated base state.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        base: Vec<f64>,
        /// Read the base as physical variables.
        #[arg(long)]
        physical: bool,
        #[arg(long, value_enum, default_value = "1")]
        family: Family,
        #[arg(long)]
        smax: f64,
        #[arg(long, default_value_t = 41)]
        points: usize,
    },
    /// Run a scenario and write series.csv, constants.json and verdicts.json.
    Run {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact characteristics for the growing-drift Burgers example.
    Prop14 {
        #[arg(long)]
        r: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long = "T", default_value_t = 100.0)]
        t_end: f64,
    },
    /// Identity and hypothesis audits for the built-in systems.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn print_json<T: serde::Serialize>(v: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn execute(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Constants { scenario } => {
            let cfg = ScenarioConfig::load(&scenario)?;
            cfg.validate()?;
            let law = cfg.system.build()?;
            let shock = cfg.shock.resolve(&*law)?;
            let c = ContractionConfig::construct(&*law, &shock, &cfg.constants.search, &cfg.constants.overrides())?;
            print_json(&c)?;
            Ok(true)
        }
        Command::Curve {
            system,
            gamma,
            base,
            physical,
            family,
            smax,
            points,
        } => {
            let law = SystemSpec::parse_name(&system, gamma)?.build()?;
            if base.len() != law.dim() {
                return Err(Error::Config(format!("base needs {} components", law.dim())));
            }
            let b = if physical { law.from_physical(&base) } else { StateVector::try_new(&base)? };
            let fam = match family {
                Family::First => ShockFamily::First,
                Family::Last => ShockFamily::Last,
            };
            let c = shock_curve(&*law, &b, fam, smax, points)?;
            let cols: Vec<String> = (0..law.dim()).map(|k| format!("u{k}")).collect();
            println!("s,sigma,{}", cols.join(","));
            for p in &c.points {
                let vals: Vec<String> = p.state.as_slice().iter().map(|v| format!("{v:?}")).collect();
                println!("{:?},{:?},{}", p.s, p.sigma, vals.join(","));
            }
            Ok(true)
        }
        Command::Run { scenario, out } => {
            let mut cfg = ScenarioConfig::load(&scenario)?;
            if out.is_some() {
                cfg.output.dir = out;
            }
            let rec = run_scenario(&cfg)?;
            print_json(&serde_json::json!({
                "scenario_hash": rec.scenario_hash,
                "steps": rec.steps,
                "wall_seconds": rec.wall_seconds,
                "verdicts": rec.verdicts,
            }))?;
            Ok(rec.pass())
        }
        Command::Prop14 { r, eps, t_end } => {
            let rep = prop14_experiment(r, eps, t_end)?;
            print_json(&rep)?;
            Ok(rep.pass)
        }
        Command::Verify { seed } => {
            let rep = verify_suite(seed);
            print_json(&rep)?;
            Ok(rep.pass())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
