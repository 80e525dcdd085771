//! The `watson` command line: single evaluations, grid tables, figure data and the
//! verification suites.
//!
//! Everything returns an [`Outcome`] rather than printing, so the same code paths can be
//! driven from tests and examples. Grid commands evaluate rows on the rayon pool and
//! emit them in grid order.

mod record;
pub mod verify;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

pub use record::{
    human_number, machine_number, render_csv, render_json, render_text, round_significant, OutputRecord, Status,
    CSV_HEADER, SIGNIFICANT_DIGITS,
};
pub use verify::{Check, Report, Suite, VerifyConfig};

use crate::error::{Error, Result};
use crate::hyperseries::{continuous_i, TruncationControl, DEFAULT_FIXED_TERMS, DEFAULT_MAX_TERMS, DEFAULT_TOLERANCE};
use crate::lattice::{LatticeFamily, LatticeQuery};
use crate::physics::{
    curie_temperature, fluctuation_p, magnetization, neel_temperature, reduced_critical_temperature,
    CriticalTemperature, SpinSystem,
};

pub const EXIT_OK: i32 = 0;
/// A verification check failed.
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
/// A single evaluation diverged or did not converge.
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Clone, Parser)]
#[command(name = "watson", version, about = "Watson-like lattice integrals on hyper-bcc lattices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Evaluate one integral.
    Eval(EvalArgs),
    /// Evaluate one family over a (d, eta) grid.
    Table(TableArgs),
    /// I(d, 1) and I(d, 1.005) over a range of real d.
    Figure1(Figure1Args),
    /// Relative magnetization and reduced critical temperature over a range of real d.
    Figure2(Figure2Args),
    /// Ground-state magnetization and critical temperatures of one spin system.
    Physics(PhysicsArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct SeriesOptions {
    /// Relative tolerance of the series sum.
    #[arg(long, env = "LATTICE_TOL")]
    pub tol: Option<f64>,
    /// Term budget in tolerance mode.
    #[arg(long, env = "LATTICE_MAX_TERMS")]
    pub max_terms: Option<u64>,
    /// Sum exactly M terms instead of running to a tolerance.
    #[arg(long = "fixed-M", value_name = "M")]
    pub fixed_m: Option<u64>,
}

impl SeriesOptions {
    pub fn control(&self) -> Result<TruncationControl> {
        if let Some(terms) = self.fixed_m {
            return Ok(TruncationControl::Fixed { terms });
        }
        let tolerance = self.tol.unwrap_or(DEFAULT_TOLERANCE);
        if !(tolerance > 0.0) || !tolerance.is_finite() {
            return Err(Error::domain(format!("tolerance {tolerance} must be positive")));
        }
        let max_terms = self.max_terms.unwrap_or(DEFAULT_MAX_TERMS);
        if max_terms == 0 {
            return Err(Error::domain("max-terms must be positive"));
        }
        Ok(TruncationControl::Tolerance { tolerance, max_terms })
    }
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub family: LatticeFamily,
    #[arg(long)]
    pub d: f64,
    #[arg(long)]
    pub eta: f64,
    #[command(flatten)]
    pub series: SeriesOptions,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Exit 0 even when the series diverges or does not converge.
    #[arg(long)]
    pub allow_divergent: bool,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    #[arg(long)]
    pub family: LatticeFamily,
    /// Comma-separated values or start:stop:step ranges.
    #[arg(long)]
    pub d: String,
    /// Comma-separated values or start:stop:step ranges.
    #[arg(long)]
    pub eta: String,
    #[command(flatten)]
    pub series: SeriesOptions,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct Figure1Args {
    #[arg(long = "fixed-M", value_name = "M", default_value_t = DEFAULT_FIXED_TERMS)]
    pub fixed_m: u64,
    /// Values or start:stop:step ranges of d.
    #[arg(long, default_value = "1.01:5:0.01")]
    pub d: String,
}

#[derive(Debug, Clone, Args)]
pub struct Figure2Args {
    #[arg(long, default_value_t = 2.5)]
    pub spin: f64,
    #[command(flatten)]
    pub series: SeriesOptions,
    /// Values or start:stop:step ranges of d.
    #[arg(long, default_value = "1.01:20:0.01")]
    pub d: String,
}

#[derive(Debug, Clone, Args)]
pub struct PhysicsArgs {
    #[arg(long)]
    pub d: f64,
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    #[arg(long, default_value_t = 2.5)]
    pub spin: f64,
    #[command(flatten)]
    pub series: SeriesOptions,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long)]
    pub allow_divergent: bool,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(value_enum, default_value = "all")]
    pub suite: Suite,
    /// Seed of the Monte Carlo checks.
    #[arg(long, env = "LATTICE_SEED", default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000_000)]
    pub mc_samples: u64,
}

/// What a command wrote and how the process should exit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub exit_code: i32,
}

impl Outcome {
    fn success(stdout: String) -> Self {
        Self { stdout, stderr: String::new(), exit_code: EXIT_OK }
    }

    fn usage(error: &Error) -> Self {
        Self { stdout: String::new(), stderr: format!("error: {error}\n"), exit_code: EXIT_USAGE }
    }
}

/// Runs a parsed command. Input errors become exit code [`EXIT_USAGE`].
pub fn execute(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Eval(a) => eval(a),
        Command::Table(a) => table(a),
        Command::Figure1(a) => figure1(a).map(Outcome::success),
        Command::Figure2(a) => figure2(a).map(Outcome::success),
        Command::Physics(a) => physics(a),
        Command::Verify(a) => Ok(verify_command(a)),
    };
    match result {
        Ok(outcome) => outcome,
        Err(e @ (Error::Domain(_) | Error::InvalidDenominatorParam(_) | Error::ModulusOutOfRange(_))) => {
            Outcome::usage(&e)
        }
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), exit_code: EXIT_NUMERICAL },
    }
}

/// Parses `args` (without the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("watson")).chain(args.into_iter().map(Into::into));
    match Cli::try_parse_from(argv) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let rendered = e.render().to_string();
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            if code == EXIT_OK {
                Outcome::success(rendered)
            } else {
                Outcome { stdout: String::new(), stderr: rendered, exit_code: code }
            }
        }
    }
}

fn render(records: &[OutputRecord], format: Format) -> String {
    match format {
        Format::Text => render_text(records),
        Format::Csv => render_csv(records),
        Format::Json => render_json(records),
    }
}

fn exit_for(records: &[OutputRecord], allow_divergent: bool) -> i32 {
    if !allow_divergent && records.iter().any(|r| r.status.is_failure()) {
        EXIT_NUMERICAL
    } else {
        EXIT_OK
    }
}

/// Evaluates one query into a record.
pub fn evaluate_record(query: &LatticeQuery, control: &TruncationControl) -> Result<OutputRecord> {
    let record = OutputRecord::new(query.family.name(), query.dimension, query.anisotropy, None);
    match query.evaluate(control) {
        Ok(v) => Ok(record.from_lattice(v)),
        Err(e) => record.from_error(e),
    }
}

fn eval(args: &EvalArgs) -> Result<Outcome> {
    let control = args.series.control()?;
    let query = LatticeQuery::new(args.family, args.d, args.eta)?;
    let records = [evaluate_record(&query, &control)?];
    Ok(Outcome {
        stdout: render(&records, args.format),
        stderr: String::new(),
        exit_code: exit_for(&records, args.allow_divergent),
    })
}

/// Expands `"1,2,3"`, `"1:2:0.5"` or mixtures of both.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let number = |s: &str| -> Result<f64> {
        let v: f64 = s.trim().parse().map_err(|_| Error::domain(format!("'{s}' is not a number")))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::domain(format!("'{s}' is not finite")))
        }
    };
    let mut values = Vec::new();
    for item in spec.split(',').filter(|s| !s.trim().is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [single] => values.push(number(single)?),
            [start, stop, step] => {
                let (start, stop, step) = (number(start)?, number(stop)?, number(step)?);
                if !(step > 0.0) || stop < start {
                    return Err(Error::domain(format!("range '{item}' needs step > 0 and stop >= start")));
                }
                let count = ((stop - start) / step + 1e-9).floor() as u64;
                if count > 10_000_000 {
                    return Err(Error::domain(format!("range '{item}' has too many points")));
                }
                // Rounding to 12 digits keeps 1.01 + 99·0.01 printing as 2.
                values.extend((0..=count).map(|i| {
                    let x = start + i as f64 * step;
                    format!("{x:.11e}").parse::<f64>().unwrap_or(x)
                }));
            }
            _ => return Err(Error::domain(format!("cannot parse grid item '{item}'"))),
        }
    }
    if values.is_empty() {
        return Err(Error::domain("empty grid"));
    }
    Ok(values)
}

fn table(args: &TableArgs) -> Result<Outcome> {
    let control = args.series.control()?;
    let ds = parse_grid(&args.d)?;
    let etas = parse_grid(&args.eta)?;
    let queries = ds
        .iter()
        .flat_map(|&d| etas.iter().map(move |&eta| (d, eta)))
        .map(|(d, eta)| LatticeQuery::new(args.family, d, eta))
        .collect::<Result<Vec<_>>>()?;
    let records = queries.par_iter().map(|q| evaluate_record(q, &control)).collect::<Result<Vec<_>>>()?;
    Ok(Outcome::success(render(&records, args.format)))
}

fn check_figure_grid(ds: &[f64]) -> Result<()> {
    if let Some(d) = ds.iter().find(|&&d| d <= 1.0) {
        return Err(Error::domain(format!("figure grids need d > 1, got {d}")));
    }
    Ok(())
}

/// Header of `figure1`.
pub const FIGURE1_HEADER: &str = "d,I_eta_1,I_eta_1.005";
/// Header of `figure2`.
pub const FIGURE2_HEADER: &str = "d,rel_mag_eta_1,rel_mag_eta_1.005,red_Tc_eta_1,red_Tc_eta_1.005,zero_Tc_eta_1";

fn figure1(args: &Figure1Args) -> Result<String> {
    let ds = parse_grid(&args.d)?;
    check_figure_grid(&ds)?;
    let control = TruncationControl::fixed(args.fixed_m);
    let rows = ds
        .par_iter()
        .map(|&d| {
            let a = continuous_i(d, 1.0, &control)?.value;
            let b = continuous_i(d, 1.005, &control)?.value;
            Ok(format!("{},{},{}\n", machine_number(d), machine_number(a), machine_number(b)))
        })
        .collect::<Result<Vec<String>>>()?;
    Ok(std::iter::once(format!("{FIGURE1_HEADER}\n")).chain(rows).collect())
}

fn figure2(args: &Figure2Args) -> Result<String> {
    let ds = parse_grid(&args.d)?;
    check_figure_grid(&ds)?;
    let control = args.series.control()?;
    let spin = args.spin;
    let rows = ds
        .par_iter()
        .map(|&d| {
            let relative = |eta: f64| -> Result<f64> {
                let system = SpinSystem::new(spin, 1.0, d, eta)?;
                Ok(magnetization(spin, fluctuation_p(&system, &control)?)? / spin)
            };
            let (m1, m2) = (relative(1.0)?, relative(1.005)?);
            let t1 = reduced_critical_temperature(d, 1.0, &control)?;
            let t2 = reduced_critical_temperature(d, 1.005, &control)?;
            Ok(format!(
                "{},{},{},{},{},{}\n",
                machine_number(d),
                machine_number(m1),
                machine_number(m2),
                machine_number(t1.value()),
                machine_number(t2.value()),
                u8::from(t1.is_zero()),
            ))
        })
        .collect::<Result<Vec<String>>>()?;
    Ok(std::iter::once(format!("{FIGURE2_HEADER}\n")).chain(rows).collect())
}

fn temperature_record(record: OutputRecord, t: Result<CriticalTemperature>) -> Result<OutputRecord> {
    match t {
        Ok(CriticalTemperature::Finite(v)) => Ok(record.with_value(v, None, None)),
        Ok(CriticalTemperature::Zero) => Ok(record.with_status(Status::ZeroTc)),
        Err(e) => record.from_error(e),
    }
}

/// The physics records of one spin system, with unit exchange.
pub fn physics_records(system: &SpinSystem, control: &TruncationControl) -> Result<Vec<OutputRecord>> {
    let (d, eta, s) = (system.dimension(), system.anisotropy(), system.spin());
    let new = |q: &str| OutputRecord::new(q, d, eta, Some(s));
    let mut records = Vec::new();
    match fluctuation_p(system, control) {
        Ok(p) => {
            let m = magnetization(s, p)?;
            records.push(new("P").with_value(p, None, None));
            records.push(new("magnetization").with_value(m, None, None));
            records.push(new("relative_magnetization").with_value(m / s, None, None));
        }
        Err(e) => {
            for q in ["P", "magnetization", "relative_magnetization"] {
                records.push(new(q).from_error(e.clone())?);
            }
        }
    }
    records.push(temperature_record(new("neel_temperature"), neel_temperature(system, control))?);
    if d.fract() == 0.0 {
        records.push(temperature_record(new("curie_temperature"), curie_temperature(system, control))?);
    }
    Ok(records)
}

fn physics(args: &PhysicsArgs) -> Result<Outcome> {
    let control = args.series.control()?;
    let system = SpinSystem::new(args.spin, 1.0, args.d, args.eta)?;
    let records = physics_records(&system, &control)?;
    Ok(Outcome {
        stdout: render(&records, args.format),
        stderr: String::new(),
        exit_code: exit_for(&records, args.allow_divergent),
    })
}

fn verify_command(args: &VerifyArgs) -> Outcome {
    let report = verify::run(args.suite, &VerifyConfig { seed: args.seed, mc_samples: args.mc_samples });
    Outcome {
        stdout: report.to_string(),
        stderr: String::new(),
        exit_code: if report.passed() { EXIT_OK } else { EXIT_CHECK_FAILED },
    }
}
