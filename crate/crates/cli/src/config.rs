//! Run configuration: an optional TOML file, overridden flag by flag.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use ttw_core::exact::ModelParams;
use ttw_core::suites::{default_tolerances, Suite, SuiteSettings, DEFAULT_TOLERANCES};

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "TTW_CONFIG";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// The file layout. Every key is optional and mirrors a flag.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub params: ParamsSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub verify: VerifySection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub omega: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub k: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(rename = "M")]
    pub m: Option<usize>,
    #[serde(rename = "Nr")]
    pub nr: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    pub suites: Option<Vec<String>>,
    pub slow: Option<bool>,
    pub parallel: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub format: Option<Format>,
    pub path: Option<PathBuf>,
    pub timings: Option<bool>,
}

/// Flag values; `None` leaves the file (or default) value alone.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub omega: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub k: Option<f64>,
    pub m: Option<usize>,
    pub nr: Option<usize>,
    pub tolerances: Vec<(String, f64)>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub slow: bool,
    pub parallel: bool,
    pub timings: bool,
}

/// Everything a run needs, after merging.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub params: ModelParams,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "Nr")]
    pub nr: usize,
    pub tolerances: BTreeMap<String, f64>,
    pub suites: Vec<Suite>,
    pub slow: bool,
    #[serde(skip)]
    pub parallel: bool,
    #[serde(skip)]
    pub timings: bool,
    pub format: Format,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

/// Problems with the configuration itself: usage errors, exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config file {0}: {1}")]
    Read(PathBuf, std::io::Error),
    #[error("invalid config file {0}: {1}")]
    Parse(PathBuf, toml::de::Error),
    #[error("{0}")]
    Invalid(String),
}

pub fn load_file(path: &Path) -> Result<ConfigFile, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read(path.to_path_buf(), e))?;
    toml::from_str(&text).map_err(|e| ConfigError::Parse(path.to_path_buf(), e))
}

/// The explicit path if given, else the one named by [`CONFIG_ENV`].
pub fn locate(explicit: Option<&Path>) -> Option<PathBuf> {
    explicit.map(Path::to_path_buf).or_else(|| std::env::var_os(CONFIG_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
}

pub fn parse_suites(names: &[String]) -> Result<Vec<Suite>, ConfigError> {
    let mut out = Vec::new();
    for name in names {
        if name == "all" {
            out.extend(Suite::ALL);
        } else {
            out.push(name.parse::<Suite>().map_err(ConfigError::Invalid)?);
        }
    }
    // merged by suite name, whatever order they were asked in
    out.sort_by_key(|s| s.name());
    out.dedup();
    Ok(out)
}

impl RunConfig {
    pub fn merge(file: &ConfigFile, flags: &Overrides, suites: Option<&[String]>) -> Result<Self, ConfigError> {
        let d = ModelParams::default();
        let params = ModelParams {
            omega: flags.omega.or(file.params.omega).unwrap_or(d.omega),
            a: flags.a.or(file.params.a).unwrap_or(d.a),
            b: flags.b.or(file.params.b).unwrap_or(d.b),
            k: flags.k.or(file.params.k).unwrap_or(d.k),
        };
        let mut tolerances = default_tolerances();
        for (name, value) in file.tolerances.iter().map(|(k, v)| (k.clone(), *v)).chain(flags.tolerances.iter().cloned()) {
            if !DEFAULT_TOLERANCES.iter().any(|(k, _)| *k == name) {
                let known: Vec<&str> = DEFAULT_TOLERANCES.iter().map(|(k, _)| *k).collect();
                return Err(ConfigError::Invalid(format!("unknown tolerance '{name}' (known: {})", known.join(", "))));
            }
            if !(value > 0.0 && value.is_finite()) {
                return Err(ConfigError::Invalid(format!("tolerance '{name}' must be positive, got {value}")));
            }
            tolerances.insert(name, value);
        }
        let names: Vec<String> = match suites {
            Some(s) if !s.is_empty() => s.to_vec(),
            _ => file.verify.suites.clone().unwrap_or_default(),
        };
        Ok(Self {
            params,
            m: flags.m.or(file.grid.m).unwrap_or(48),
            nr: flags.nr.or(file.grid.nr).unwrap_or(32),
            tolerances,
            suites: parse_suites(&names)?,
            slow: flags.slow || file.verify.slow.unwrap_or(false),
            parallel: flags.parallel || file.verify.parallel.unwrap_or(false),
            timings: flags.timings || file.output.timings.unwrap_or(false),
            format: flags.format.or(file.output.format).unwrap_or_default(),
            out: flags.out.clone().or_else(|| file.output.path.clone()),
        })
    }

    pub fn settings(&self) -> SuiteSettings {
        SuiteSettings { params: self.params, m: self.m, nr: self.nr, tolerances: self.tolerances.clone(), slow: self.slow }
    }
}
