use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::CliError;

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    /// A closed formula from the theory, e.g. `|Q_n|`.
    Formula,
    /// Immediate from the definitions.
    Elementary,
    /// Obtained from an independent computation.
    Computed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
    pub origin: Origin,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Skip {
    pub name: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub quivers: Vec<String>,
    pub checks: Vec<Check>,
    pub skipped: Vec<Skip>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

impl SuiteReport {
    pub fn new(suite: &str, quiver: &str) -> SuiteReport {
        SuiteReport {
            suite: suite.into(),
            quivers: vec![quiver.into()],
            checks: Vec::new(),
            skipped: Vec::new(),
            pass: true,
            wall_ms: None,
        }
    }

    pub fn check(&mut self, name: impl Into<String>, expected: impl ToString, got: impl ToString, origin: Origin) {
        let (expected, got) = (expected.to_string(), got.to_string());
        let pass = expected == got;
        self.push(name, expected, got, pass, origin);
    }

    /// A check whose pass condition is not string equality.
    pub fn push(&mut self, name: impl Into<String>, expected: impl ToString, got: impl ToString, pass: bool, origin: Origin) {
        self.pass &= pass;
        self.checks.push(Check {
            name: name.into(),
            expected: expected.to_string(),
            got: got.to_string(),
            pass,
            origin,
        });
    }

    pub fn skip(&mut self, name: impl Into<String>, reason: impl Into<String>) {
        self.skipped.push(Skip {
            name: name.into(),
            reason: reason.into(),
        });
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: RunConfig,
    pub suites: Vec<SuiteReport>,
    pub pass: bool,
}

impl RunReport {
    pub fn new(command: &str, config: &RunConfig, suites: Vec<SuiteReport>) -> RunReport {
        RunReport {
            tool: "qhw".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config: config.clone(),
            pass: suites.iter().all(|s| s.pass),
            suites,
        }
    }

    pub fn skipped(&self) -> usize {
        self.suites.iter().map(|s| s.skipped.len()).sum()
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => to_json(self),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let row = |w: &mut csv::Writer<Vec<u8>>, r: [&str; 7]| w.write_record(r).map_err(|e| CliError::Io(e.to_string()));
                row(&mut w, ["suite", "quiver", "check", "expected", "got", "status", "origin"])?;
                for s in &self.suites {
                    let quiver = s.quivers.join(" ");
                    for c in &s.checks {
                        let origin = serde_json::to_value(c.origin).map_err(|e| CliError::Io(e.to_string()))?;
                        let status = if c.pass { "pass" } else { "fail" };
                        row(&mut w, [&s.suite, &quiver, &c.name, &c.expected, &c.got, status, origin.as_str().unwrap_or("")])?;
                    }
                    for k in &s.skipped {
                        row(&mut w, [&s.suite, &quiver, &k.name, "", &k.reason, "skip", ""])?;
                    }
                }
                let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
            }
            Format::Text => {
                let mut out = String::new();
                for s in &self.suites {
                    out.push_str(&format!(
                        "{} {}: {}\n",
                        s.suite,
                        s.quivers.join(" "),
                        if s.pass { "pass" } else { "FAIL" }
                    ));
                    for c in &s.checks {
                        let mark = if c.pass { "ok  " } else { "FAIL" };
                        out.push_str(&format!("  {mark} {}: expected {}, got {}\n", c.name, c.expected, c.got));
                    }
                    for k in &s.skipped {
                        out.push_str(&format!("  skip {}: {}\n", k.name, k.reason));
                    }
                    if let Some(ms) = s.wall_ms {
                        out.push_str(&format!("  time {ms:.1} ms\n"));
                    }
                }
                Ok(out)
            }
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}
