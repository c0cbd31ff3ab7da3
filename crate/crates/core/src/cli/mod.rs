//! Command-line front end. `run` parses arguments and returns the exit code with the
//! captured output, so the commands can be driven from tests without a subprocess.

mod commands;
mod suite;

use std::fmt;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::liesuper::{load_named, LieSuperData};
use crate::scalars::{parse_rational, rat, Rational};
use crate::vacalc::Mode;

pub use commands::square_zero_products;
pub use suite::run_suite;

#[derive(Parser, Debug)]
#[command(name = "susyw", version, about = "Lambda-brackets, SUSY BRST complexes and screening kernels")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Algebra name or path; an alternative to the positional argument.
    #[arg(long, global = true)]
    pub algebra: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// One JSON object per line, keys sorted.
    Records,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Λ-bracket of two states: `ns` or a Lie superalgebra (affine at κ = v²).
    Bracket {
        a: String,
        b: String,
        target: Option<String>,
        /// Central charge of the Neveu-Schwarz algebra, a rational function of v.
        #[arg(long)]
        c: Option<String>,
        #[arg(long)]
        classical: bool,
    },
    /// Every check for one algebra.
    Suite(SuiteArgs),
    #[command(subcommand)]
    Brst(BrstCommand),
    #[command(subcommand)]
    Conf(ConfCommand),
    #[command(subcommand)]
    Wfind(WfindCommand),
}

#[derive(Args, Debug, Clone)]
pub struct SuiteArgs {
    pub target: Option<String>,
    #[arg(long)]
    pub classical: bool,
    #[arg(long)]
    pub maxweight: Option<String>,
    /// m overrides, `name=q,...` keyed by positive root vector.
    #[arg(long)]
    pub m: Option<String>,
    /// Extra values of v at which kernel dimensions are compared.
    #[arg(long = "nu-eval", value_delimiter = ',')]
    pub nu_eval: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum BrstCommand {
    /// Generators and differential of the complex.
    Build {
        target: Option<String>,
        #[arg(long)]
        classical: bool,
    },
    /// d² = 0 and the closed-form brackets, one line per identity.
    Check {
        target: Option<String>,
        #[arg(long)]
        classical: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum ConfCommand {
    /// The W-algebra superconformal vector G = ω + τ + ∂H̄.
    WVector {
        target: Option<String>,
        #[arg(long)]
        m: Option<String>,
    },
    /// Kac-Todorov vector of the affine algebra.
    KacTodorov { target: Option<String> },
}

#[derive(Subcommand, Debug)]
pub enum WfindCommand {
    /// Joint kernel of the screenings, weight by weight.
    Kernel {
        target: Option<String>,
        #[arg(long)]
        maxweight: Option<String>,
        #[arg(long = "nu-eval", value_delimiter = ',')]
        nu_eval: Vec<String>,
    },
    /// Neveu-Schwarz check of the weight-3/2 generator.
    NsCheck { target: Option<String> },
    /// Block decomposition of a principal all-odd simple system.
    Factorize { target: Option<String> },
}

/// Resolved configuration shared by the checking commands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub algebra: String,
    pub mode: Mode,
    pub m: Vec<(String, Rational)>,
    pub max_weight: Rational,
    pub nu_eval: Vec<Rational>,
    pub format: Format,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "{}", s),
        }
    }
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Collected output. Checks count towards the exit status.
pub struct Report {
    pub format: Format,
    lines: Vec<String>,
    pub checks: usize,
    pub failed: usize,
}

impl Report {
    pub fn new(format: Format) -> Self {
        Report { format, lines: Vec::new(), checks: 0, failed: 0 }
    }

    /// `fields` must be a JSON object; `kind` is added to it.
    pub fn record(&mut self, kind: &str, fields: Value, text: impl Into<String>) {
        match self.format {
            Format::Text => self.lines.push(text.into()),
            Format::Records => {
                let mut obj = match fields {
                    Value::Object(m) => m,
                    _ => Map::new(),
                };
                obj.insert("kind".into(), json!(kind));
                self.lines.push(Value::Object(obj).to_string());
            }
        }
    }

    pub fn check(&mut self, section: &str, name: &str, pass: bool, detail: impl Into<String>) {
        let detail = detail.into();
        self.checks += 1;
        if !pass {
            self.failed += 1;
        }
        let mark = if pass { "PASS" } else { "FAIL" };
        let text = if detail.is_empty() {
            format!("{} {}: {}", mark, section, name)
        } else {
            format!("{} {}: {} | {}", mark, section, name, detail)
        };
        self.record("check", json!({"section": section, "name": name, "pass": pass, "detail": detail}), text);
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    pub fn output(&self) -> String {
        let mut s = self.lines.join("\n");
        if !s.is_empty() {
            s.push('\n');
        }
        s
    }
}

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let mut rep = Report::new(cli.format);
    match dispatch(&cli, &mut rep) {
        Ok(()) => Outcome { code: if rep.passed() { 0 } else { 1 }, stdout: rep.output(), stderr: String::new() },
        Err(e) => Outcome { code: 2, stdout: rep.output(), stderr: format!("error: {}\n", e) },
    }
}

fn dispatch(cli: &Cli, rep: &mut Report) -> Result<(), CliError> {
    let pick = |t: &Option<String>| target(t, &cli.algebra);
    match &cli.command {
        Command::Bracket { a, b, target: t, c, classical } => {
            commands::bracket(rep, a, b, &pick(t)?, c.as_deref(), mode(*classical))
        }
        Command::Suite(args) => {
            let cfg = config(args, cli)?;
            run_suite(rep, &cfg)
        }
        Command::Brst(BrstCommand::Build { target: t, classical }) => {
            commands::brst_build(rep, &load(&pick(t)?)?, mode(*classical))
        }
        Command::Brst(BrstCommand::Check { target: t, classical }) => {
            commands::brst_check(rep, &load(&pick(t)?)?, mode(*classical))
        }
        Command::Conf(ConfCommand::WVector { target: t, m }) => {
            commands::w_vector_cmd(rep, &load(&pick(t)?)?, &parse_m(m.as_deref())?)
        }
        Command::Conf(ConfCommand::KacTodorov { target: t }) => commands::kac_todorov_cmd(rep, &load(&pick(t)?)?),
        Command::Wfind(WfindCommand::Kernel { target: t, maxweight, nu_eval }) => {
            let w = parse_weight(maxweight.as_deref().unwrap_or("2"))?;
            commands::kernel(rep, &load(&pick(t)?)?, &w, &parse_points(nu_eval)?)
        }
        Command::Wfind(WfindCommand::NsCheck { target: t }) => commands::ns_check(rep, &load(&pick(t)?)?),
        Command::Wfind(WfindCommand::Factorize { target: t }) => commands::factorize(rep, &load(&pick(t)?)?),
    }
}

fn target(positional: &Option<String>, flag: &Option<String>) -> Result<String, CliError> {
    match (positional, flag) {
        (Some(p), Some(f)) if p != f => Err(CliError::Usage(format!("algebra given twice: '{}' and '{}'", p, f))),
        (Some(p), _) => Ok(p.clone()),
        (None, Some(f)) => Ok(f.clone()),
        (None, None) => Err(CliError::Usage("no algebra given".into())),
    }
}

fn mode(classical: bool) -> Mode {
    if classical {
        Mode::Classical
    } else {
        Mode::Quantum
    }
}

pub(crate) fn load(name: &str) -> Result<LieSuperData, CliError> {
    Ok(load_named(name)?)
}

/// Δmax must lie in ½ℤ≥0.
pub fn parse_weight(s: &str) -> Result<Rational, CliError> {
    let w = parse_rational(s).ok_or_else(|| CliError::Usage(format!("bad weight '{}'", s)))?;
    if w < rat(0, 1) || !(&w * rat(2, 1)).is_integer() {
        return Err(CliError::Usage(format!("weight {} is not a nonnegative half-integer", w)));
    }
    Ok(w)
}

fn parse_points(xs: &[String]) -> Result<Vec<Rational>, CliError> {
    xs.iter().map(|s| parse_rational(s).ok_or_else(|| CliError::Usage(format!("bad value of v '{}'", s)))).collect()
}

/// `name=q,name=q`.
pub fn parse_m(s: Option<&str>) -> Result<Vec<(String, Rational)>, CliError> {
    let Some(s) = s else { return Ok(Vec::new()) };
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (k, v) = p.split_once('=').ok_or_else(|| CliError::Usage(format!("expected name=q, got '{}'", p)))?;
            let q = parse_rational(v).ok_or_else(|| CliError::Usage(format!("bad rational '{}'", v)))?;
            Ok((k.trim().to_string(), q))
        })
        .collect()
}

fn config(args: &SuiteArgs, cli: &Cli) -> Result<RunConfig, CliError> {
    Ok(RunConfig {
        algebra: target(&args.target, &cli.algebra)?,
        mode: mode(args.classical),
        m: parse_m(args.m.as_deref())?,
        max_weight: parse_weight(args.maxweight.as_deref().unwrap_or("3/2"))?,
        nu_eval: parse_points(&args.nu_eval)?,
        format: cli.format,
    })
}
