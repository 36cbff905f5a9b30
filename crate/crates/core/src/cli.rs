//! Command-line front end.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::engine::{self, stratify, Diagnostic, EvalOrder, FixpointReport, Mode};
use crate::error::{Error, Result};
use crate::kb::{self, parse_phi, parse_proximity, BackgroundKnowledge, KnowledgeBase, PhiSpec};
use crate::lang::{parse_program_with, Atom, Program, SafetyMode};
use crate::query::{self, Goal, QueryLimits};
use crate::values::TruthValue;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_SAFETY: i32 = 3;
pub const EXIT_VALUE: i32 = 4;
pub const EXIT_ITERATIONS: i32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Command {
    /// Load and validate without evaluating
    #[default]
    Check,
    /// Least fixpoint of the program alone
    Fixpoint,
    /// Knowledge-base consequence with proximity
    Consequence,
    /// Goal-directed answers
    Query,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub command: Command,
    pub program: PathBuf,
    pub prox: Option<PathBuf>,
    pub phi: Option<PathBuf>,
    pub mode: Mode,
    pub max_iters: usize,
    /// Overrides the program's `%safety` directive.
    pub safety: Option<SafetyMode>,
    /// Treat closure diagnostics as errors.
    pub strict_values: bool,
    pub format: OutputFormat,
    pub order: Option<String>,
    pub goal: Option<String>,
    pub at_least: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonAtom {
    pub atom: String,
    pub level: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonReport {
    pub system: String,
    pub converged: bool,
    pub iterations: usize,
    pub atoms: Vec<JsonAtom>,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Parser)]
#[command(name = "mvdatalog", version, about = "Multivalued Datalog with proximity-based knowledge bases")]
pub struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Load a program and report safety, stratification and value findings
    Check(Args),
    /// Compute the least fixpoint of a program
    Fixpoint(Args),
    /// Compute the consequence of a knowledge base
    Consequence(Args),
    /// Answer a goal against a knowledge base
    Query(Args),
}

#[derive(Debug, clap::Args)]
struct Args {
    program: PathBuf,
    #[arg(long, value_name = "FILE")]
    prox: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    phi: Option<PathBuf>,
    #[arg(long, default_value = "nondet", value_parser = ["det", "nondet"])]
    mode: String,
    #[arg(long, value_name = "N", default_value_t = engine::DEFAULT_MAX_ITERS)]
    max_iters: usize,
    #[arg(long, value_parser = ["strict", "paper-examples"])]
    safety: Option<String>,
    #[arg(long)]
    strict_values: bool,
    #[arg(long)]
    json: bool,
    /// Rule evaluation order, 1-based, e.g. `2,3,1`
    #[arg(long, value_name = "i,j,k")]
    order: Option<String>,
    #[arg(long, value_name = "ATOM")]
    goal: Option<String>,
    #[arg(long, value_name = "LEVEL")]
    at_least: Option<String>,
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig> {
        let (command, a) = match self.command {
            Sub::Check(a) => (Command::Check, a),
            Sub::Fixpoint(a) => (Command::Fixpoint, a),
            Sub::Consequence(a) => (Command::Consequence, a),
            Sub::Query(a) => (Command::Query, a),
        };
        Ok(RunConfig {
            command,
            program: a.program,
            prox: a.prox,
            phi: a.phi,
            mode: a.mode.parse()?,
            max_iters: a.max_iters,
            safety: a.safety.map(|s| s.parse()).transpose()?,
            strict_values: a.strict_values,
            format: if a.json { OutputFormat::Json } else { OutputFormat::Text },
            order: a.order,
            goal: a.goal,
            at_least: a.at_least,
        })
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidArgument(_) | Error::Io(_) => EXIT_USAGE,
        Error::Syntax { .. } | Error::Arity { .. } | Error::SystemMismatch(_) => EXIT_PARSE,
        Error::Safety(_) | Error::Stratification(_) => EXIT_SAFETY,
        Error::Value(_) => EXIT_VALUE,
    }
}

fn parse_order(text: &str, rule_count: usize) -> Result<EvalOrder> {
    let seq = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidArgument(format!("bad rule index `{s}` in --order")))
        })
        .collect::<Result<Vec<_>>>()?;
    EvalOrder::from_sequence(&seq, rule_count)
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })
}

fn load_kb(config: &RunConfig, program: Program) -> Result<KnowledgeBase> {
    let sys = program.system;
    let bk = match &config.prox {
        Some(p) => parse_proximity(&read(p)?, sys)?,
        None => BackgroundKnowledge::identity(sys),
    };
    let phi = match &config.phi {
        Some(p) => parse_phi(&read(p)?)?,
        None => PhiSpec::new(),
    };
    KnowledgeBase::new(program, bk, phi)
}

fn level_vec(v: &TruthValue) -> Vec<f64> {
    match *v {
        TruthValue::Scalar(x) => vec![x],
        TruthValue::Pair(a, b) => vec![a, b],
    }
}

fn render(
    config: &RunConfig,
    program: &Program,
    atoms: &[(Atom, TruthValue)],
    report: &FixpointReport,
    extra: &[String],
) -> RunOutput {
    let mut diagnostics: Vec<String> = program.warnings.clone();
    diagnostics.extend(report.diagnostics.iter().map(Diagnostic::to_string));
    diagnostics.extend(extra.iter().cloned());
    let status = if !report.converged {
        EXIT_ITERATIONS
    } else if config.strict_values && report.diagnostics.iter().any(Diagnostic::is_closure) {
        EXIT_VALUE
    } else {
        EXIT_OK
    };
    match config.format {
        OutputFormat::Text => RunOutput {
            status,
            stdout: atoms.iter().map(|(a, v)| format!("{a} = {v}\n")).collect(),
            stderr: diagnostics.iter().map(|d| format!("{d}\n")).collect(),
        },
        OutputFormat::Json => {
            let json = JsonReport {
                system: program.system.tag().to_string(),
                converged: report.converged,
                iterations: report.iterations,
                atoms: atoms
                    .iter()
                    .map(|(a, v)| JsonAtom {
                        atom: a.to_string(),
                        level: level_vec(v),
                    })
                    .collect(),
                diagnostics,
            };
            RunOutput {
                status,
                stdout: serde_json::to_string_pretty(&json).expect("report serializes") + "\n",
                stderr: String::new(),
            }
        }
    }
}

fn check(config: &RunConfig, program: &Program) -> Result<RunOutput> {
    if config.prox.is_some() || config.phi.is_some() {
        load_kb(config, program.clone())?;
    }
    let mut out = format!(
        "system: {}\nfacts: {}\nrules: {}\n",
        program.system,
        program.facts.len(),
        program.rules.len()
    );
    let strat = stratify(program);
    let order = match &config.order {
        Some(o) => parse_order(o, program.rules.len())?,
        None => engine::resolve_order(program, None)?.0,
    };
    out.push_str(&format!("order: {order}\n"));
    let mut stderr = String::new();
    for w in program.warnings.iter().chain(&strat.warnings) {
        stderr.push_str(w);
        stderr.push('\n');
    }
    Ok(RunOutput {
        status: EXIT_OK,
        stdout: out,
        stderr,
    })
}

fn execute(config: &RunConfig) -> Result<RunOutput> {
    let text = read(&config.program)?;
    let program = parse_program_with(&text, config.safety)?;
    let order = config
        .order
        .as_deref()
        .map(|o| parse_order(o, program.rules.len()))
        .transpose()?;
    match config.command {
        Command::Check => check(config, &program),
        Command::Fixpoint => {
            let report = engine::fixpoint(&program, config.mode, order.as_ref(), config.max_iters)?;
            let atoms: Vec<_> = report.interpretation.iter().map(|(a, v)| (a.clone(), *v)).collect();
            Ok(render(config, &program, &atoms, &report, &[]))
        }
        Command::Consequence => {
            let kb = load_kb(config, program.clone())?;
            let facts: Vec<_> = program.fact_map().into_iter().collect();
            let report = kb::consequence_from(&kb, &facts, order.as_ref(), config.max_iters)?;
            let atoms: Vec<_> = report.interpretation.iter().map(|(a, v)| (a.clone(), *v)).collect();
            Ok(render(config, &program, &atoms, &report, &[]))
        }
        Command::Query => {
            let Some(goal) = &config.goal else {
                return Err(Error::InvalidArgument("query needs --goal".into()));
            };
            let kb = load_kb(config, program.clone())?;
            let goal = Goal::parse(goal, config.at_least.as_deref(), &kb)?;
            let limits = QueryLimits {
                max_iters: config.max_iters,
                ..QueryLimits::default()
            };
            let answer = query::answer(&kb, &goal, limits)?;
            Ok(render(config, &program, &answer.atoms, &answer.report, &answer.tree.diagnostics))
        }
    }
}

/// Runs one command; never panics on bad input.
pub fn run(config: &RunConfig) -> RunOutput {
    execute(config).unwrap_or_else(|e| RunOutput {
        status: exit_code(&e),
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
    })
}

/// Parses `args` (program name first) and runs.
pub fn run_args<I, T>(args: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => match cli.into_config() {
            Ok(config) => run(&config),
            Err(e) => RunOutput {
                status: EXIT_USAGE,
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            },
        },
        Err(e) => {
            let status = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if status == EXIT_OK {
                RunOutput { status, stdout: text, stderr: String::new() }
            } else {
                RunOutput { status, stdout: String::new(), stderr: text }
            }
        }
    }
}
