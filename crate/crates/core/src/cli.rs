//! Command-line front end: `verify`, `eval` and `list`.
//!
//! Every run-wide flag can also be set through a `BETAINT_*` environment
//! variable. Precedence, lowest first: built-in defaults, the suite's
//! `[defaults]` table, environment, flags, per-case suite settings.
//!
//! Exit status: 0 when every verdict passes, 1 when some case fails, 2 on
//! engine errors and configuration errors.

use crate::error::{Error, Result};
use crate::identities::{
    parse_id_list, parse_param, run_suite, verify_case, CaseSettings, Engine, IdentityCase, IdentityId, ReportFormat,
    RunSettings, Suite, Summary, Verdict, VerificationRecord,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "betaint", version, about = "Numerical verification of beta-integral identities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every case of a suite and write a report.
    Verify(VerifyArgs),
    /// Check one identity at the given parameters.
    ///
    /// Parameters follow the id as `--name value`; values use suite syntax,
    /// e.g. `--alpha1 '[1, 0.5]'` or `--Sigma1 '[[1, 0], [0, 2]]'`.
    Eval(EvalArgs),
    /// List the identities with their closed forms and hypotheses.
    List,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => ReportFormat::Json,
            Format::Csv => ReportFormat::Csv,
            Format::Table => ReportFormat::Table,
        }
    }
}

/// Flags shared by `verify` and `eval`.
#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Master seed for Monte Carlo cases.
    #[arg(long, env = "BETAINT_SEED")]
    pub seed: Option<u64>,
    /// Relative tolerance of the verdict.
    #[arg(long, env = "BETAINT_REL_TOL")]
    pub rel_tol: Option<f64>,
    /// Absolute floor of the verdict, used for vanishing identities.
    #[arg(long, env = "BETAINT_ABS_FLOOR")]
    pub abs_floor: Option<f64>,
    /// Monte Carlo sample count.
    #[arg(long, env = "BETAINT_MC_SAMPLES")]
    pub mc_samples: Option<usize>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, env = "BETAINT_PARALLELISM")]
    pub parallelism: Option<usize>,
    /// Report format.
    #[arg(long, value_enum, env = "BETAINT_FORMAT", default_value = "table")]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, env = "BETAINT_OUT")]
    pub out: Option<PathBuf>,
    /// Record wall-clock time per case.
    #[arg(long, env = "BETAINT_TIMINGS")]
    pub timings: bool,
}

impl RunArgs {
    fn apply(&self, run: &mut RunSettings) -> Result<()> {
        if let Some(v) = self.seed {
            run.master_seed = v;
        }
        if let Some(v) = self.rel_tol {
            run.tol.rel_tol = v;
        }
        if let Some(v) = self.abs_floor {
            run.tol.abs_floor = v;
        }
        if let Some(v) = self.mc_samples {
            run.mc_samples = v;
        }
        if let Some(v) = self.parallelism {
            run.parallelism = v;
        }
        run.timings |= self.timings;
        run.tol.validate()
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite file, or `default` for the bundled grid.
    #[arg(long, env = "BETAINT_SUITE", default_value = "default")]
    pub suite: String,
    /// Comma-separated identity ids to keep, e.g. `CB-1,CB-0`.
    #[arg(long, env = "BETAINT_ONLY")]
    pub only: Option<String>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Identity id, e.g. `CB-1`.
    pub id: String,
    /// Integration route: `quadrature` or `mc`.
    #[arg(long)]
    pub engine: Option<String>,
    #[command(flatten)]
    pub run: RunArgs,
    /// Identity parameters as `--name value` pairs.
    #[arg(allow_hyphen_values = true, trailing_var_arg = true, num_args = 0.., value_name = "PARAMS")]
    pub params: Vec<String>,
}

/// Parses arguments and runs; returns the exit status.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_PASS };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            code
        }
    }
}

/// Runs a parsed command; returns the exit status.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Verify(args) => cmd_verify(args, out, err),
        Command::Eval(args) => cmd_eval(args, out, err),
        Command::List => cmd_list(out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Config(format!("cannot write report: {e}"))
}

fn exit_code(summary: &Summary) -> i32 {
    if summary.engine_errors > 0 {
        EXIT_ERROR
    } else if summary.failed > 0 {
        EXIT_FAIL
    } else {
        EXIT_PASS
    }
}

fn write_report(records: &[VerificationRecord], args: &RunArgs, out: &mut dyn Write) -> Result<()> {
    let text = ReportFormat::from(args.format).emit(records)?;
    match &args.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Config(format!("cannot write '{}': {e}", path.display()))),
        None => out.write_all(text.as_bytes()).map_err(io),
    }
}

fn summary_line(s: &Summary) -> String {
    format!(
        "{} cases: {} passed, {} failed, {} engine errors",
        s.total, s.passed, s.failed, s.engine_errors
    )
}

/// `verify`: runs a suite and writes the report.
pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let mut suite = Suite::resolve(&args.suite)?;
    if let Some(only) = &args.only {
        suite = suite.filter(&parse_id_list(only)?);
    }
    let mut run = RunSettings::default();
    suite.defaults.apply(&mut run);
    args.run.apply(&mut run)?;
    let report = run_suite(&suite.cases, &run)?;
    write_report(&report.records, &args.run, out)?;
    writeln!(err, "{}", summary_line(&report.summary)).map_err(io)?;
    Ok(exit_code(&report.summary))
}

/// Splits `--name value` and `--name=value` pairs.
/// Run flags that take no value.
const SWITCHES: [&str; 1] = ["timings"];

fn named_pairs(tokens: &[String]) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    let mut it = tokens.iter();
    while let Some(tok) = it.next() {
        let name = tok
            .strip_prefix("--")
            .ok_or_else(|| Error::Config(format!("expected '--name value', got '{tok}'")))?;
        let (name, value) = match name.split_once('=') {
            Some((n, v)) => (n.to_string(), v.to_string()),
            None if SWITCHES.contains(&name) => (name.to_string(), "true".to_string()),
            None => {
                let v = it
                    .next()
                    .ok_or_else(|| Error::Config(format!("missing value for '--{name}'")))?;
                (name.to_string(), v.clone())
            }
        };
        pairs.push((name, value));
    }
    Ok(pairs)
}

fn parse_flag<T: std::str::FromStr>(name: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("invalid value '{value}' for '--{name}'")))
}

/// `eval`: checks one case and prints its record.
pub fn cmd_eval(args: &EvalArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let id: IdentityId = args.id.parse()?;
    let mut run_args = args.run.clone();
    let mut settings = CaseSettings {
        engine: args.engine.as_deref().map(str::parse::<Engine>).transpose()?,
        ..CaseSettings::default()
    };
    let mut params = Vec::new();
    // Run flags written after the first parameter land here too.
    for (name, value) in named_pairs(&args.params)? {
        match name.as_str() {
            "engine" => settings.engine = Some(value.parse()?),
            "seed" => run_args.seed = Some(parse_flag(&name, &value)?),
            "mc-samples" | "samples" => run_args.mc_samples = Some(parse_flag(&name, &value)?),
            "rel-tol" => run_args.rel_tol = Some(parse_flag(&name, &value)?),
            "abs-floor" => run_args.abs_floor = Some(parse_flag(&name, &value)?),
            "parallelism" => run_args.parallelism = Some(parse_flag(&name, &value)?),
            "timings" => run_args.timings = parse_flag(&name, &value)?,
            "out" => run_args.out = Some(PathBuf::from(value)),
            "format" => {
                run_args.format = Format::from_str(&value, true)
                    .map_err(|_| Error::Config(format!("invalid value '{value}' for '--format'")))?
            }
            _ => params.push((name.clone(), parse_param(&name, &value)?)),
        }
    }
    let mut run = RunSettings::default();
    run_args.apply(&mut run)?;
    let case = IdentityCase::new(id, params)?.with_settings(settings)?;
    let record = verify_case(&case, &run);
    write_report(std::slice::from_ref(&record), &run_args, out)?;
    if let Some(e) = &record.error {
        writeln!(err, "{id}: {e}").map_err(io)?;
    }
    Ok(match record.verdict {
        Verdict::Pass => EXIT_PASS,
        Verdict::Fail => EXIT_FAIL,
        Verdict::EngineError => EXIT_ERROR,
    })
}

/// `list`: the identity catalog in registry order.
pub fn cmd_list(out: &mut dyn Write) -> Result<i32> {
    for id in IdentityId::ALL {
        let c = id.catalog();
        let params = id.parameter_names().join(", ");
        writeln!(out, "{:<6} {}", id.as_str(), c.title).map_err(io)?;
        writeln!(out, "       {}", c.display).map_err(io)?;
        writeln!(out, "       parameters: {params}").map_err(io)?;
        writeln!(out, "       hypotheses: {}", c.hypothesis).map_err(io)?;
    }
    Ok(EXIT_PASS)
}
