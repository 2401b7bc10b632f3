//! `qgrav`: perihelion precession under a quantized-space force law.
//!
//! Exit codes: 0 success, 2 usage or input-data error, 3 model/domain error.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qgrav::analytic::QuantumRule;
use qgrav::bodies::{find_planet, planets_from};
use qgrav::calibration::{fit_delta, observations_from, sweep_delta};
use qgrav::numeric::{measured_precession, run_orbit, DEFAULT_TOL};
use qgrav::report::{build_table, TABLE_DELTAS};
use qgrav::{planet_precession, Constants, Execution};

use crate::output::Format;

#[derive(Parser, Debug)]
#[command(name = "qgrav", version, about = "Perihelion precession under a quantized-space correction to Newtonian gravity")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Planet elements file (JSON, schema_version 1). Defaults to
    /// $QGRAV_DATA_DIR/planets.json, then the bundled set.
    #[arg(long, global = true, value_name = "PATH")]
    planets: Option<PathBuf>,

    /// Observed precession table (CSV: planet,value_arcsec,sigma_arcsec).
    #[arg(long, global = true, value_name = "PATH")]
    observations: Option<PathBuf>,

    /// How the observation error becomes a length quantum: `perihelion`
    /// uses q_l = delta * a(1-e), `semiminor` uses q_l = delta * b and
    /// predicts about 23% more for Mercury.
    #[arg(long, global = true, value_enum, default_value_t = RuleArg::Perihelion)]
    rule: RuleArg,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RuleArg {
    Perihelion,
    Semiminor,
}

impl From<RuleArg> for QuantumRule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Perihelion => QuantumRule::PerihelionDistance,
            RuleArg::Semiminor => QuantumRule::SemiMinorAxis,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Observation, relativity baseline and model columns for every planet.
    #[command(allow_negative_numbers = true)]
    Table {
        /// Observation errors in arcsec, comma separated.
        #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = TABLE_DELTAS.to_vec())]
        deltas: Vec<f64>,
    },
    /// Centurial precession of one planet for one observation error.
    #[command(allow_negative_numbers = true)]
    Precess {
        #[arg(long)]
        planet: String,
        /// Observation error, arcsec.
        #[arg(long)]
        delta: f64,
        /// Also integrate the exact orbit for this many revolutions.
        #[arg(long)]
        orbits: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Integrate the exact orbit equation and export (theta, u, r) samples.
    #[command(allow_negative_numbers = true)]
    Orbit {
        #[arg(long)]
        planet: String,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 3)]
        orbits: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Weighted least-squares fit of one observation error across planets.
    Fit,
    /// Precession of one planet over evenly spaced observation errors.
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[arg(long)]
        planet: String,
        #[arg(long, default_value_t = 0.0)]
        from: f64,
        #[arg(long, default_value_t = 0.05)]
        to: f64,
        #[arg(long, default_value_t = 11)]
        steps: usize,
    },
}

fn run(cli: Cli) -> qgrav::Result<String> {
    let consts = Constants::default();
    let common = &cli.common;
    let rule = QuantumRule::from(common.rule);
    let planets = planets_from(common.planets.as_deref())?;
    let fmt = common.format;
    let exec = Execution::default();

    match cli.command {
        Command::Table { deltas } => {
            let observations = observations_from(common.observations.as_deref())?;
            let rows = build_table(&consts, &planets, &observations, &deltas, rule, exec)?;
            Ok(output::table(fmt, &consts, rule, &rows))
        }
        Command::Precess { planet, delta, orbits, tol } => {
            let el = find_planet(&planets, &planet)?;
            let mut results = vec![planet_precession(&consts, el, delta, rule)?];
            if let Some(n) = orbits {
                results.push(measured_precession(&consts, el, delta, rule, n, tol)?);
            }
            Ok(output::precess(fmt, &consts, rule, &el.name, delta, &results))
        }
        Command::Orbit { planet, delta, orbits, tol } => {
            let el = find_planet(&planets, &planet)?;
            let run = run_orbit(&consts, el, delta, rule, orbits, tol)?;
            Ok(output::orbit(fmt, &consts, rule, &el.name, delta, &run))
        }
        Command::Fit => {
            let observations = observations_from(common.observations.as_deref())?;
            let fit = fit_delta(&consts, &planets, &observations, rule)?;
            Ok(output::fit(fmt, &consts, &fit))
        }
        Command::Sweep { planet, from, to, steps } => {
            let el = find_planet(&planets, &planet)?;
            let rows = sweep_delta(&consts, el, from, to, steps, rule, exec)?;
            Ok(output::sweep(fmt, &consts, rule, &el.name, &rows))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version to stdout and usage errors to stderr
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qgrav: {e}");
            ExitCode::from(if e.is_model_error() { 3 } else { 2 })
        }
    }
}
