//! Command-line front end.
//!
//! Exit codes: 0 feasible / satisfied, 1 infeasible / violated, 2 invalid
//! input, 3 internal limit or self-test failure.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use crate::complex::{FeasibilityResult, MarginalComplex, DEFAULT_ATOM_CAP};
use crate::density::CovarianceTriple;
use crate::error::{Error, Result};
use crate::joint::ChshOutcome;
use crate::polytope::{parse_rational_list, CovarianceQuad, InequalityReport};
use crate::rational::Rational;
use crate::report::{self, SimulationReport};
use crate::sim::{HiddenVariableModel, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Feasible = 0,
    Infeasible = 1,
    InvalidInput = 2,
    Limit = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn from_feasible(feasible: bool) -> Self {
        if feasible {
            ExitStatus::Feasible
        } else {
            ExitStatus::Infeasible
        }
    }
}

impl From<&Error> for ExitStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::ProductSpaceTooLarge { .. } | Error::Internal(_) => ExitStatus::Limit,
            _ => ExitStatus::InvalidInput,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "bell-marginals", version, about = "Exact marginal-consistency and Bell polytope checks")]
pub struct Cli {
    /// Emit machine-readable JSON instead of a table.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Three pair densities (JSON file) or covariances "s1,s2,s3": tetrahedron,
    /// six Bell inequalities and LP reconstruction, cross-checked.
    Check(CheckArgs),
    /// Four covariances "s11,s12,s21,s22" (or a JSON file): CHSH and the
    /// 16-atom LP.
    Chsh(CheckArgs),
    /// Consistency of a marginal complex given as JSON.
    Vorobev(VorobevArgs),
    /// Run a hidden-variable model over an experiment plan and analyze it.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// JSON file path, `-` for stdin, or a comma-separated list of rationals.
    pub input: String,
    /// Skip the LP leg of the self-test.
    #[arg(long)]
    pub skip_lp: bool,
}

#[derive(Debug, Args)]
pub struct VorobevArgs {
    /// MarginalComplex JSON file, or `-` for stdin.
    pub input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_ATOM_CAP)]
    pub atom_cap: u64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Model configuration JSON.
    pub model: PathBuf,
    /// Experiment plan JSON.
    pub plan: PathBuf,
    /// Overrides the plan's seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides the plan's trials per category.
    #[arg(long)]
    pub trials: Option<u64>,
    /// Denominator bound for rounding empirical covariances.
    #[arg(long, default_value_t = 10_000)]
    pub max_denominator: u64,
}

fn read_source(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

/// JSON from a file (or `-`), else a literal comma-separated list.
fn read_numbers(input: &str) -> Result<Value> {
    let path = Path::new(input);
    if input == "-" || path.is_file() {
        Ok(serde_json::from_str(&read_source(path)?)?)
    } else {
        let list = parse_rational_list(input)?;
        Ok(Value::Array(list.iter().map(|r| Value::String(r.to_string())).collect()))
    }
}

pub fn parse_check_input(input: &str) -> Result<CovarianceTriple> {
    report::parse_triple(read_numbers(input)?)
}

pub fn parse_chsh_input(input: &str) -> Result<CovarianceQuad> {
    report::parse_quad(read_numbers(input)?)
}

fn report_table(out: &mut String, title: &str, r: &InequalityReport) {
    let _ = writeln!(out, "{title}:");
    for s in &r.slacks {
        let flag = if s.slack.is_negative() { "  VIOLATED" } else { "" };
        let _ = writeln!(out, "  {:<7} slack {}{flag}", s.id, s.slack);
    }
}

fn join(v: &[Rational]) -> String {
    v.iter().map(Rational::to_string).collect::<Vec<_>>().join(", ")
}

fn verdict_line(out: &mut String, feasible: bool) {
    let _ = writeln!(out, "verdict: {}", if feasible { "feasible" } else { "infeasible" });
}

fn check_cmd(args: &CheckArgs, json_out: bool, out: &mut String) -> Result<ExitStatus> {
    let r = report::check(&parse_check_input(&args.input)?, args.skip_lp)?;
    if json_out {
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&r)?);
        return Ok(ExitStatus::from_feasible(r.feasible));
    }
    let _ = writeln!(out, "covariances: {}", join(&r.covariances));
    report_table(out, "tetrahedron", &r.tetrahedron);
    report_table(out, "bell inequalities", &r.bell_six);
    match &r.lp {
        None => {
            let _ = writeln!(out, "lp: skipped");
        }
        Some(FeasibilityResult::Witness(_)) => {
            let _ = writeln!(out, "lp: feasible");
        }
        Some(FeasibilityResult::Certificate(c)) => {
            let _ = writeln!(out, "lp: infeasible, Farkas certificate verified");
            for (id, y) in c.ids.iter().zip(&c.coefficients) {
                if !y.is_zero() {
                    let _ = writeln!(out, "  {id:<10} {y}");
                }
            }
        }
    }
    if let (Some(w), Some(i)) = (&r.witness, &r.t_interval) {
        let _ = writeln!(out, "witness (t = 0): {}", join(w.masses()));
        let _ = writeln!(out, "t interval: [{}, {}]", i.lo, i.hi);
    }
    verdict_line(out, r.feasible);
    Ok(ExitStatus::from_feasible(r.feasible))
}

fn chsh_cmd(args: &CheckArgs, json_out: bool, out: &mut String) -> Result<ExitStatus> {
    let r = report::chsh(&parse_chsh_input(&args.input)?, args.skip_lp)?;
    if json_out {
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&r)?);
        return Ok(ExitStatus::from_feasible(r.feasible));
    }
    let _ = writeln!(out, "covariances: {}", join(&r.covariances));
    report_table(out, "chsh", &r.chsh);
    let lp = match &r.lp {
        None => "skipped",
        Some(ChshOutcome::Witness(_)) => "feasible",
        Some(ChshOutcome::Infeasible { .. }) => "infeasible, Farkas certificate verified",
    };
    let _ = writeln!(out, "lp: {lp}");
    if r.boundary {
        let _ = writeln!(out, "note: the point lies on the boundary of the CHSH polytope");
    }
    verdict_line(out, r.feasible);
    Ok(ExitStatus::from_feasible(r.feasible))
}

fn vorobev_cmd(args: &VorobevArgs, out: &mut String) -> Result<ExitStatus> {
    let complex: MarginalComplex = serde_json::from_str(&read_source(&args.input)?)?;
    let (result, v) = report::vorobev(&complex, args.atom_cap)?;
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v)?);
    Ok(ExitStatus::from_feasible(result.is_feasible()))
}

fn analysis_table(out: &mut String, r: &SimulationReport) {
    let a = &r.analysis;
    let _ = writeln!(out, "{:<12} {:>12} {:>12} {:>12}", "category", "estimate", "std.err", "rounded");
    for (c, (e, x)) in r.record.categories.iter().zip(a.estimates.iter().zip(&a.rounded)) {
        let (s1, s2) = &c.settings;
        let _ = writeln!(
            out,
            "{:<12} {:>12.6} {:>12.6} {:>12}",
            format!("({s1},{s2})"),
            e.estimate,
            e.standard_error,
            x.to_string()
        );
    }
    let _ = writeln!(out, "{:<8} {:>14} {:>12}", "ineq", "slack", "z");
    for s in &a.slack_stats {
        let z = s.z.map_or("-".to_string(), |z| format!("{z:.2}"));
        let flag = if s.slack.is_negative() { "  VIOLATED" } else { "" };
        let _ = writeln!(out, "{:<8} {:>14.6} {:>12}{flag}", s.id, s.slack.to_f64(), z);
    }
    let verdict = match a.verdict {
        Verdict::Feasible => "feasible",
        Verdict::Infeasible => "infeasible (significant violation)",
        Verdict::Inconclusive => "inconclusive (violation within sampling noise)",
    };
    let _ = writeln!(out, "verdict: {verdict}");
}

fn simulate_cmd(args: &SimulateArgs, json_out: bool, out: &mut String) -> Result<ExitStatus> {
    let model: HiddenVariableModel = serde_json::from_str(&read_source(&args.model)?)?;
    let plan = report::parse_plan(&read_source(&args.plan)?, args.seed, args.trials)?;
    let r = report::simulate(&model, &plan, args.max_denominator)?;
    if json_out {
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&r)?);
    } else {
        let rec = &r.record;
        let _ = writeln!(
            out,
            "model {} ({}), seed {}, {} trials per category",
            rec.model_kind,
            &rec.model_hash[..12],
            rec.seed,
            rec.trials_per_category
        );
        analysis_table(out, &r);
    }
    Ok(ExitStatus::from_feasible(r.feasible()))
}

/// Runs one command, writing its report into `out`.
pub fn execute(cli: &Cli, out: &mut String) -> Result<ExitStatus> {
    match &cli.command {
        Command::Check(a) => check_cmd(a, cli.json, out),
        Command::Chsh(a) => chsh_cmd(a, cli.json, out),
        Command::Vorobev(a) => vorobev_cmd(a, out),
        Command::Simulate(a) => simulate_cmd(a, cli.json, out),
    }
}

/// Parses arguments, runs, prints, and returns the process exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return ExitStatus::InvalidInput.code();
            }
            let _ = write!(stdout, "{e}");
            return 0;
        }
    };
    let mut out = String::new();
    match execute(&cli, &mut out) {
        Ok(status) => {
            let _ = stdout.write_all(out.as_bytes());
            status.code()
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            ExitStatus::from(&e).code()
        }
    }
}
