use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use qhw_linalg::Field;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SideArg {
    Plus,
    Minus,
}

/// `q` for the rationals, `p=N` for the prime field with `N` elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldSpec(pub Field);

impl FieldSpec {
    pub fn parse(text: &str) -> Result<FieldSpec, CliError> {
        let text = text.trim();
        if text == "q" || text == "Q" {
            return Ok(FieldSpec(Field::Rational));
        }
        let p = text
            .strip_prefix("p=")
            .and_then(|n| n.parse::<u64>().ok())
            .ok_or_else(|| CliError::Usage(format!("field must be `q` or `p=N`, got `{text}`")))?;
        Field::prime(p).map(FieldSpec).map_err(|_| CliError::Usage(format!("{p} is not prime")))
    }

    pub fn name(&self) -> String {
        match self.0.characteristic() {
            0 => "q".into(),
            p => format!("p={p}"),
        }
    }
}

/// Options shared by every subcommand; each overrides the config file.
#[derive(Args, Clone, Debug, Default)]
pub struct Overrides {
    /// `q` or `p=N`.
    #[arg(long, global = true)]
    pub field: Option<String>,
    #[arg(long, global = true)]
    pub window: Option<usize>,
    #[arg(long, global = true)]
    pub stage: Option<usize>,
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Skipped checks become errors (exit code 3).
    #[arg(long, global = true)]
    pub strict: bool,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// TOML file with the same keys as the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Record wall time in reports, which makes them run-dependent.
    #[arg(long, global = true)]
    pub timing: bool,
    /// Which trivial extension `verify trivext` studies.
    #[arg(long, global = true, value_enum)]
    pub side: Option<SideArg>,
    /// Random modules per extension in `verify trivext`.
    #[arg(long, global = true)]
    pub modules: Option<usize>,
    /// Random words per quiver in `verify leavitt`.
    #[arg(long, global = true)]
    pub words: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    field: Option<String>,
    window: Option<usize>,
    stage: Option<usize>,
    depth: Option<usize>,
    format: Option<Format>,
    seed: Option<u64>,
    strict: Option<bool>,
    timing: Option<bool>,
    side: Option<SideArg>,
    modules: Option<usize>,
    words: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    #[serde(serialize_with = "field_name")]
    pub field: FieldSpec,
    /// `None` means each suite uses its own default.
    pub window: Option<usize>,
    pub stage: Option<usize>,
    pub depth: usize,
    pub seed: u64,
    pub side: SideArg,
    pub modules: usize,
    pub words: usize,
    #[serde(skip)]
    pub format: Format,
    #[serde(skip)]
    pub strict: bool,
    #[serde(skip)]
    pub timing: bool,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

fn field_name<S: serde::Serializer>(f: &FieldSpec, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&f.name())
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            field: FieldSpec(Field::Rational),
            window: None,
            stage: None,
            depth: 6,
            seed: 0,
            side: SideArg::Minus,
            modules: 50,
            words: 1000,
            format: Format::Text,
            strict: false,
            timing: false,
            out: None,
        }
    }
}

fn read_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

impl RunConfig {
    pub fn resolve(o: &Overrides) -> Result<RunConfig, CliError> {
        let file = match &o.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        let d = RunConfig::default();
        let field = match o.field.as_ref().or(file.field.as_ref()) {
            Some(text) => FieldSpec::parse(text)?,
            None => d.field,
        };
        let c = RunConfig {
            field,
            window: o.window.or(file.window),
            stage: o.stage.or(file.stage),
            depth: o.depth.or(file.depth).unwrap_or(d.depth),
            seed: o.seed.or(file.seed).unwrap_or(d.seed),
            side: o.side.or(file.side).unwrap_or(d.side),
            modules: o.modules.or(file.modules).unwrap_or(d.modules),
            words: o.words.or(file.words).unwrap_or(d.words),
            format: o.format.or(file.format).unwrap_or(d.format),
            strict: o.strict || file.strict.unwrap_or(false),
            timing: o.timing || file.timing.unwrap_or(false),
            out: o.out.clone(),
        };
        for (name, v) in [("window", c.window), ("stage", c.stage), ("depth", Some(c.depth))] {
            if v == Some(0) {
                return Err(CliError::Usage(format!("--{name} must be at least 1")));
            }
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fields() {
        assert_eq!(FieldSpec::parse("q").unwrap().0, Field::Rational);
        assert_eq!(FieldSpec::parse("p=5").unwrap().name(), "p=5");
        assert!(FieldSpec::parse("p=6").is_err());
        assert!(FieldSpec::parse("r").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "field = \"p=3\"\ndepth = 4\nseed = 9\n").unwrap();
        let o = Overrides {
            config: Some(path.clone()),
            depth: Some(2),
            ..Default::default()
        };
        let c = RunConfig::resolve(&o).unwrap();
        assert_eq!((c.field.name(), c.depth, c.seed), ("p=3".to_string(), 2, 9));
        std::fs::write(&path, "colour = 1\n").unwrap();
        assert!(matches!(RunConfig::resolve(&o), Err(CliError::Usage(_))));
    }

    #[test]
    fn zero_depth_is_rejected() {
        let o = Overrides {
            window: Some(0),
            ..Default::default()
        };
        assert!(RunConfig::resolve(&o).is_err());
    }
}
