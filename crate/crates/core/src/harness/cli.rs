//! `ewens-ldp` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain error, 3 numerical failure.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use crate::concentration::bound_reports;
use crate::error::Error;
use crate::ldp::{rate_alpha, rate_ewens, RateEvalConfig};
use crate::mgf::{mgf, MgfConfig, MgfMethod};
use crate::mittag::{ml3_series, ml_integral, ml_series, QuadratureConfig, SeriesConfig};
use crate::model::ModelParams;
use crate::partition::crp_sample_stream;
use crate::rng::DEFAULT_SEED;

use super::format::{render, Cell, Format, Table};
use super::selftest::run_selftest;
use super::verify::verify_bound;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// A number that remembers how it was written, so outputs echo inputs verbatim.
#[derive(Debug, Clone, PartialEq)]
pub struct Num {
    raw: String,
    value: f64,
}

impl FromStr for Num {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let raw = s.trim().to_string();
        let value = raw.parse::<f64>().map_err(|e| format!("'{s}' is not a number: {e}"))?;
        Ok(Num { raw, value })
    }
}

impl Num {
    fn echo(&self) -> Cell {
        Cell::Echo(self.raw.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeedArg {
    Fixed(u64),
    Random,
}

impl FromStr for SeedArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("random") {
            return Ok(SeedArg::Random);
        }
        let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
            Some(hex) => u64::from_str_radix(hex, 16),
            None => s.parse::<u64>(),
        };
        parsed
            .map(SeedArg::Fixed)
            .map_err(|_| format!("seed must be an unsigned integer or 'random', got '{s}'"))
    }
}

fn resolve_seed(seed: Option<SeedArg>) -> u64 {
    match seed {
        None => DEFAULT_SEED,
        Some(SeedArg::Fixed(s)) => s,
        Some(SeedArg::Random) => rand::random(),
    }
}

#[derive(Debug, Parser)]
#[command(name = "ewens-ldp", version, about = "Block counts of Ewens-Pitman partitions: MGFs, rate functions and tail bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output encoding
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Fixed number of decimals for computed values (default: 17 significant digits)
    #[arg(long, global = true)]
    decimals: Option<usize>,
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Discount parameter in [0, 1)
    #[arg(long)]
    alpha: Num,
    /// Strength parameter, > -alpha
    #[arg(long, default_value = "0")]
    theta: Num,
}

impl ModelArgs {
    fn params(&self) -> Result<ModelParams, Error> {
        ModelParams::new(self.alpha.value, self.theta.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Series,
    MlIntegral,
    Sharp,
    GfCoeff,
    Enumeration,
    Exact,
}

impl From<MethodArg> for MgfMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Series => MgfMethod::Series,
            MethodArg::MlIntegral => MgfMethod::MlIntegral,
            MethodArg::Sharp => MgfMethod::Sharp,
            MethodArg::GfCoeff => MgfMethod::GfCoeff,
            MethodArg::Enumeration => MgfMethod::Enumeration,
            MethodArg::Exact => MgfMethod::Exact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MlMethod {
    Series,
    Integral,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate K_n by the sequential construction
    Sample {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        reps: u64,
        /// Unsigned integer, hex with 0x, or 'random'
        #[arg(long)]
        seed: Option<SeedArg>,
    },
    /// Moment-generating function of K_n
    Mgf {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        n: usize,
        /// One or more comma-separated values
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        t: Vec<Num>,
        #[arg(long, value_enum, default_value_t = MethodArg::Series)]
        method: MethodArg,
    },
    /// Rate function of K_n / n
    Rate {
        #[arg(long)]
        alpha: Option<Num>,
        #[arg(long)]
        theta: Option<Num>,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        x: Vec<Num>,
        /// Ewens rate (alpha = 0), needs --theta
        #[arg(long)]
        ewens: bool,
    },
    /// Exponential tail bound next to the exact tail and the Chernoff bound
    Bound {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<Num>,
        /// Skip the optimised Chernoff bound
        #[arg(long)]
        no_chernoff: bool,
    },
    /// Monte Carlo check of the tail bound
    Verify {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        x: Vec<Num>,
        #[arg(long, default_value_t = 10_000)]
        reps: u64,
        #[arg(long)]
        seed: Option<SeedArg>,
    },
    /// Mittag-Leffler functions
    Ml {
        #[arg(long)]
        alpha: Num,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        z: Vec<Num>,
        /// Three-parameter function: beta (default 1)
        #[arg(long)]
        beta: Option<Num>,
        /// Three-parameter function: gamma (default 1)
        #[arg(long)]
        gamma: Option<Num>,
        #[arg(long, value_enum, default_value_t = MlMethod::Series)]
        method: MlMethod,
    },
    /// Run the built-in invariant checks
    Selftest,
}

enum Failure {
    Usage(String),
    Lib(Error),
    Checks(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Checks(n) => write!(f, "{n} self-test check(s) failed"),
        }
    }
}

struct Output {
    table: Table,
    meta: Option<Map<String, Value>>,
    note: Option<String>,
    /// Failed self-test checks; reported after the table is written.
    failed_checks: usize,
}

impl From<Table> for Output {
    fn from(table: Table) -> Self {
        Output {
            table,
            meta: None,
            note: None,
            failed_checks: 0,
        }
    }
}

/// Parses `args` (program name first) and runs the command, writing to the
/// process's stdout and stderr.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_cli_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = execute(&cli.command).and_then(|o| {
        let text = render(&o.table, cli.format, cli.decimals, o.meta);
        if let Some(note) = o.note {
            let _ = writeln!(err, "{note}");
        }
        match &cli.out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?,
            None => out
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Usage(format!("cannot write output: {e}")))?,
        }
        match o.failed_checks {
            0 => Ok(()),
            n => Err(Failure::Checks(n)),
        }
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "ewens-ldp: {f}");
            match f {
                Failure::Usage(_) => EXIT_USAGE,
                Failure::Lib(e) if e.is_domain() => EXIT_DOMAIN,
                Failure::Lib(_) | Failure::Checks(_) => EXIT_NUMERIC,
            }
        }
    }
}

fn execute(cmd: &Command) -> Result<Output, Failure> {
    match cmd {
        Command::Sample { model, n, reps, seed } => sample(model, *n, *reps, *seed),
        Command::Mgf { model, n, t, method } => mgf_cmd(model, *n, t, *method),
        Command::Rate { alpha, theta, x, ewens } => rate_cmd(alpha.as_ref(), theta.as_ref(), x, *ewens),
        Command::Bound { model, n, x, no_chernoff } => bound_cmd(model, *n, x, !no_chernoff),
        Command::Verify { model, n, x, reps, seed } => verify_cmd(model, *n, x, *reps, *seed),
        Command::Ml { alpha, z, beta, gamma, method } => ml_cmd(alpha, z, beta.as_ref(), gamma.as_ref(), *method),
        Command::Selftest => selftest_cmd(),
    }
}

fn sample(model: &ModelArgs, n: usize, reps: u64, seed: Option<SeedArg>) -> Result<Output, Failure> {
    let params = model.params()?;
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()).into());
    }
    let seed = resolve_seed(seed);
    let mut table = Table::new(&["alpha", "theta", "n", "seed", "replicate", "k_n"]);
    for i in 0..reps {
        let k = crp_sample_stream(&params, n, seed, i);
        table.push(vec![model.alpha.echo(), model.theta.echo(), n.into(), seed.into(), i.into(), k.into()]);
    }
    Ok(table.into())
}

fn mgf_cmd(model: &ModelArgs, n: usize, ts: &[Num], method: MethodArg) -> Result<Output, Failure> {
    let params = model.params()?;
    let cfg = MgfConfig::default();
    let mut table = Table::new(&[
        "alpha", "theta", "n", "t", "method", "value", "log_value", "terms_used", "remainder",
    ]);
    for t in ts {
        let r = mgf(&params, n, t.value, method.into(), &cfg)?;
        table.push(vec![
            model.alpha.echo(),
            model.theta.echo(),
            n.into(),
            t.echo(),
            r.method.name().into(),
            r.value.into(),
            r.log_value.into(),
            r.terms_used.into(),
            r.remainder.into(),
        ]);
    }
    Ok(table.into())
}

fn rate_cmd(alpha: Option<&Num>, theta: Option<&Num>, xs: &[Num], ewens: bool) -> Result<Output, Failure> {
    let mut table = Table::new(&["x", "t_x", "rate"]);
    if ewens {
        let theta = theta.ok_or_else(|| Failure::Usage("--ewens needs --theta".into()))?;
        for x in xs {
            let rate = rate_ewens(theta.value, x.value)?;
            let t_x = (x.value / theta.value).ln();
            table.push(vec![x.echo(), t_x.into(), rate.into()]);
        }
    } else {
        let alpha = alpha.ok_or_else(|| Failure::Usage("rate needs --alpha (or --ewens with --theta)".into()))?;
        let cfg = RateEvalConfig::default();
        for x in xs {
            let r = rate_alpha(alpha.value, x.value, &cfg)?;
            table.push(vec![x.echo(), r.t_x.into(), r.rate.into()]);
        }
    }
    Ok(table.into())
}

fn bound_cmd(model: &ModelArgs, n: usize, xs: &[Num], chernoff: bool) -> Result<Output, Failure> {
    let params = model.params()?;
    let values: Vec<f64> = xs.iter().map(|x| x.value).collect();
    let rows = bound_reports(&params, n, &values, chernoff, &SeriesConfig::default())?;
    let mut table = Table::new(&[
        "alpha", "theta", "n", "x", "paper_bound", "exact_tail", "exact_chernoff",
    ]);
    for (x, r) in xs.iter().zip(rows) {
        table.push(vec![
            model.alpha.echo(),
            model.theta.echo(),
            n.into(),
            x.echo(),
            r.paper_bound.into(),
            r.exact_tail.into(),
            r.exact_chernoff.into(),
        ]);
    }
    Ok(table.into())
}

fn verify_cmd(model: &ModelArgs, n: usize, xs: &[Num], reps: u64, seed: Option<SeedArg>) -> Result<Output, Failure> {
    let params = model.params()?;
    let seed = resolve_seed(seed);
    let values: Vec<f64> = xs.iter().map(|x| x.value).collect();
    let report = verify_bound(&params, n, &values, reps, seed)?;
    let mut table = Table::new(&[
        "alpha",
        "theta",
        "n",
        "x",
        "reps",
        "seed",
        "hits",
        "p_hat",
        "ci_lower_95",
        "ci_upper_95",
        "exact_tail",
        "paper_bound",
        "exact_chernoff",
        "violation",
        "certified_violation",
    ]);
    for (x, r) in xs.iter().zip(&report.rows) {
        table.push(vec![
            model.alpha.echo(),
            model.theta.echo(),
            n.into(),
            x.echo(),
            reps.into(),
            seed.into(),
            r.mc.hits.into(),
            r.mc.p_hat.into(),
            r.mc.ci_lower_95.into(),
            r.mc.ci_upper_95.into(),
            r.exact_tail.into(),
            r.paper_bound.into(),
            r.exact_chernoff.into(),
            r.violation.into(),
            r.certified_violation.into(),
        ]);
    }
    let mut meta = Map::new();
    meta.insert("alpha".into(), Value::from(report.alpha));
    meta.insert("theta".into(), Value::from(report.theta));
    meta.insert("n".into(), Value::from(report.n));
    meta.insert("reps".into(), Value::from(report.reps));
    meta.insert("seed".into(), Value::from(report.seed));
    meta.insert("violations".into(), Value::from(report.violations()));
    meta.insert("certified_violations".into(), Value::from(report.certified_violations()));
    let note = format!(
        "verify: n={} reps={} seed={} rows={} violations={} certified={} wall_time={:.3}s",
        report.n,
        report.reps,
        report.seed,
        report.rows.len(),
        report.violations(),
        report.certified_violations(),
        report.wall_time_secs
    );
    Ok(Output {
        table,
        meta: Some(meta),
        note: Some(note),
        failed_checks: 0,
    })
}

fn ml_cmd(alpha: &Num, zs: &[Num], beta: Option<&Num>, gamma: Option<&Num>, method: MlMethod) -> Result<Output, Failure> {
    let three = beta.is_some() || gamma.is_some();
    let b = beta.map_or(1.0, |b| b.value);
    let g = gamma.map_or(1.0, |g| g.value);
    let echo_or_one = |v: Option<&Num>| v.map_or(Cell::Echo("1".into()), Num::echo);
    let mut table = Table::new(&["alpha", "beta", "gamma", "z", "method", "value"]);
    for z in zs {
        let value = match method {
            MlMethod::Series if three => ml3_series(alpha.value, b, g, z.value, &SeriesConfig::default())?,
            MlMethod::Series => ml_series(alpha.value, z.value, &SeriesConfig::default())?,
            MlMethod::Integral if three => {
                return Err(Failure::Usage(
                    "the integral method covers the one-parameter function only".into(),
                ))
            }
            MlMethod::Integral => ml_integral(alpha.value, z.value, &QuadratureConfig::default())?,
        };
        let name = match method {
            MlMethod::Series => "series",
            MlMethod::Integral => "integral",
        };
        table.push(vec![alpha.echo(), echo_or_one(beta), echo_or_one(gamma), z.echo(), name.into(), value.into()]);
    }
    Ok(table.into())
}

fn selftest_cmd() -> Result<Output, Failure> {
    let checks = run_selftest();
    let failed = checks.iter().filter(|c| !c.passed).count();
    let mut table = Table::new(&["check", "status", "detail"]);
    for c in &checks {
        table.push(vec![
            c.name.into(),
            if c.passed { "pass" } else { "FAIL" }.into(),
            Cell::Text(c.detail.clone()),
        ]);
    }
    let mut output = Output::from(table);
    output.failed_checks = failed;
    Ok(output)
}
