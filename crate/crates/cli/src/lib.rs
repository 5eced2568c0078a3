//! The `qhw` command line: verification suites, quiver comparison and small
//! computations, with reports in JSON, CSV or text.

pub mod config;
pub mod report;
pub mod suites;

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use qhw_invariants::{equivalence_report, format_group, k0gr_stages, InvariantsError};
use qhw_leavitt::{slice_basis, stage_algebra, LeavittElement};
use qhw_quiver::{parse_quiver, Quiver};
use serde::Serialize;
use thiserror::Error;

use config::{Format, Overrides, RunConfig};
use report::{to_json, RunReport, SuiteReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Precondition(_) => 3,
            _ => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Parse(_) => "parse",
            CliError::Precondition(_) => "precondition",
            CliError::Io(_) => "io",
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "qhw", version, about = "Verification suites for quiver algebras and Leavitt path algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a verification suite on a quiver file.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        quiver: PathBuf,
    },
    /// Compare the graded K-theory of two quivers.
    Compare { first: PathBuf, second: PathBuf },
    /// Print a single computed object.
    Compute {
        #[arg(value_enum)]
        what: What,
        quiver: PathBuf,
        /// The element for `normal-form`, the degree for `basis`.
        arg: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Koszul,
    Leavitt,
    Trivext,
    Sequences,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum What {
    Basis,
    StageAlgebra,
    K0,
    NormalForm,
}

/// What a command prints, and the exit code it asks for.
#[derive(Debug)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

pub fn load_quiver(path: &Path) -> Result<(String, Arc<Quiver>), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let q = parse_quiver(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let name = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
    Ok((name, Arc::new(q)))
}

/// Runs `suites` in parallel threads and returns the reports in the given order.
pub fn run_suites(suites: &[&str], name: &str, q: &Arc<Quiver>, c: &RunConfig) -> Vec<SuiteReport> {
    std::thread::scope(|s| {
        let handles: Vec<_> = suites.iter().map(|&suite| s.spawn(move || suites::run_suite(suite, name, q, c))).collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    })
}

pub fn verify(suite: SuiteArg, path: &Path, c: &RunConfig) -> Result<Outcome, CliError> {
    let (name, q) = load_quiver(path)?;
    let chosen: Vec<&str> = match suite {
        SuiteArg::All => suites::SUITES.to_vec(),
        SuiteArg::Koszul => vec!["koszul"],
        SuiteArg::Leavitt => vec!["leavitt"],
        SuiteArg::Trivext => vec!["trivext"],
        SuiteArg::Sequences => vec!["sequences"],
    };
    let report = RunReport::new("verify", c, run_suites(&chosen, &name, &q, c));
    let code = if !report.pass {
        1
    } else if c.strict && report.skipped() > 0 {
        3
    } else {
        0
    };
    Ok(Outcome {
        output: report.render(c.format)?,
        code,
    })
}

pub fn compare(first: &Path, second: &Path, c: &RunConfig) -> Result<Outcome, CliError> {
    let (n1, q1) = load_quiver(first)?;
    let (n2, q2) = load_quiver(second)?;
    let r = equivalence_report([&n1, &n2], &q1, &q2, c.depth).map_err(|e| match e {
        InvariantsError::HasSink(_) => CliError::Precondition(e.to_string()),
        #[allow(unreachable_patterns)]
        _ => CliError::Usage(e.to_string()),
    })?;
    let output = match c.format {
        Format::Json => to_json(&r)?,
        Format::Text => r.to_text(),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| CliError::Io(e.to_string());
            w.write_record(["stage", "rank", "coker", "trace", "shift_order", "matched", "differences"]).map_err(io)?;
            for s in &r.stages {
                let pair = |f: &dyn Fn(&qhw_invariants::StageData) -> String| format!("{} | {}", f(&s.data[0]), f(&s.data[1]));
                let order = |d: &qhw_invariants::StageData| d.shift_order.map_or("none".into(), |o| o.to_string());
                w.write_record([
                    s.stage.to_string(),
                    pair(&|d| d.rank.to_string()),
                    pair(&|d| format_group(&d.smith)),
                    pair(&|d| d.trace.0.to_string()),
                    pair(&order),
                    s.matched.to_string(),
                    s.differences.join("; "),
                ])
                .map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))?
        }
    };
    Ok(Outcome { output, code: 0 })
}

#[derive(Serialize)]
struct Computed<T: Serialize> {
    quiver: String,
    what: &'static str,
    value: T,
}

fn emit<T: Serialize>(c: &RunConfig, quiver: String, what: &'static str, value: T, text: String) -> Result<Outcome, CliError> {
    let output = match c.format {
        Format::Text => text,
        Format::Json => to_json(&Computed { quiver, what, value })?,
        Format::Csv => {
            let mut s = String::from("line\n");
            for l in text.lines() {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record([l]).map_err(|e| CliError::Io(e.to_string()))?;
                s.push_str(&String::from_utf8_lossy(&w.into_inner().map_err(|e| CliError::Io(e.to_string()))?));
            }
            s
        }
    };
    Ok(Outcome { output, code: 0 })
}

#[derive(Serialize)]
struct K0Line {
    stage: usize,
    rank: usize,
    unit_class: Vec<qhw_invariants::Int>,
    shift_order: Option<u64>,
    coker: String,
}

pub fn compute(what: What, path: &Path, arg: Option<&str>, c: &RunConfig) -> Result<Outcome, CliError> {
    let (name, q) = load_quiver(path)?;
    let field = c.field.0;
    let m = c.stage.unwrap_or(1);
    match what {
        What::NormalForm => {
            let text = arg.ok_or_else(|| CliError::Usage("normal-form needs an element, e.g. \"a.a*\"".into()))?;
            let x = LeavittElement::parse(q.clone(), field, text).map_err(|e| CliError::Parse(e.to_string()))?;
            let s = x.to_string();
            emit(c, name, "normal-form", &s, format!("{s}\n"))
        }
        What::StageAlgebra => {
            let s = stage_algebra(&q, m, field).map_err(|e| CliError::Precondition(e.to_string()))?;
            let line = format!("{}, dim {}", s.describe(), s.dim());
            emit(c, name, "stage-algebra", &line, format!("{line}\n"))
        }
        What::Basis => {
            let d: i64 = match arg {
                Some(t) => t.parse().map_err(|_| CliError::Usage(format!("degree must be an integer, got `{t}`")))?,
                None => 0,
            };
            let labels: Vec<String> = slice_basis(&q, d, m).iter().map(|b| b.format(&q)).collect();
            let text = labels.iter().map(|l| format!("{l}\n")).collect();
            emit(c, name, "basis", &labels, text)
        }
        What::K0 => {
            let stages = k0gr_stages(&q, c.depth).map_err(|e| CliError::Precondition(e.to_string()))?;
            let lines: Vec<K0Line> = stages
                .iter()
                .map(|s| K0Line {
                    stage: s.stage,
                    rank: s.rank,
                    unit_class: s.unit_class.clone(),
                    shift_order: s.shift_order(),
                    coker: format_group(&s.smith()),
                })
                .collect();
            let text = lines
                .iter()
                .map(|l| {
                    let unit: Vec<String> = l.unit_class.iter().map(|x| x.0.to_string()).collect();
                    let order = l.shift_order.map_or("infinite".into(), |o| o.to_string());
                    format!(
                        "stage {}: rank {}, unit [{}], shift order {}, coker T^{} = {}\n",
                        l.stage,
                        l.rank,
                        unit.join(", "),
                        order,
                        l.stage,
                        l.coker
                    )
                })
                .collect();
            emit(c, name, "k0", &lines, text)
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let c = RunConfig::resolve(&cli.overrides)?;
    let out = match &cli.command {
        Command::Verify { suite, quiver } => verify(*suite, quiver, &c)?,
        Command::Compare { first, second } => compare(first, second, &c)?,
        Command::Compute { what, quiver, arg } => compute(*what, quiver, arg.as_deref(), &c)?,
    };
    if let Some(path) = &c.out {
        std::fs::write(path, &out.output).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        return Ok(Outcome {
            output: String::new(),
            code: out.code,
        });
    }
    Ok(out)
}

/// Parses `args`, runs the command, prints and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            print!("{}", out.output);
            out.code
        }
        Err(e) => {
            eprintln!("qhw: {} error: {e}", e.kind());
            e.exit_code()
        }
    }
}
