//! Run configuration: a flat `key = value` file whose keys can all be overridden from the
//! command line.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::padic::{ExtKind, FieldConfig};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("bad value for `{key}`: {reason}")]
    BadValue { key: String, reason: String },
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
}

fn bad(key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::BadValue { key: key.to_string(), reason: reason.into() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Weil,
    Epsilon,
    LemmaA,
    #[serde(rename = "lemma_231")]
    Lemma231,
    Params,
    Ggp,
    All,
}

impl Suite {
    /// The individual suites in execution order.
    pub const EACH: [Suite; 6] = [Suite::Weil, Suite::Epsilon, Suite::LemmaA, Suite::Lemma231, Suite::Params, Suite::Ggp];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Weil => "weil",
            Suite::Epsilon => "epsilon",
            Suite::LemmaA => "lemma_a",
            Suite::Lemma231 => "lemma_231",
            Suite::Params => "params",
            Suite::Ggp => "ggp",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s.trim())
            .ok_or_else(|| bad("suite", format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub primes: Vec<u64>,
    pub ext_kinds: Vec<ExtKind>,
    pub precision: u32,
    pub tolerance: f64,
    pub max_conductor: u32,
    pub max_order: u64,
    /// Suites run by `all`.
    pub suites: Vec<Suite>,
    pub seed: u64,
    pub weil_forms: usize,
    pub weil_lambdas: usize,
    pub epsilon_samples: usize,
    pub cross_check_samples: usize,
    pub lemma_231_instances: usize,
    pub params_samples: usize,
    pub ggp_pairs: usize,
    /// Worker threads; `0` lets rayon decide.
    pub threads: usize,
    /// Adds wall-clock times to report items, which makes output run-dependent.
    pub timing: bool,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            primes: vec![3, 5, 7],
            ext_kinds: ExtKind::ALL.to_vec(),
            precision: 20,
            tolerance: 1e-8,
            max_conductor: 2,
            max_order: 12,
            suites: Suite::EACH.to_vec(),
            seed: 1,
            weil_forms: 200,
            weil_lambdas: 20,
            epsilon_samples: 50,
            cross_check_samples: 100,
            lemma_231_instances: 20,
            params_samples: 500,
            ggp_pairs: 30,
            threads: 0,
            timing: false,
            out: None,
        }
    }
}

fn list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>, ConfigError>
where
    T::Err: fmt::Display,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| bad(key, format!("`{s}`: {e}"))))
        .collect()
}

fn scalar<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value.trim().parse::<T>().map_err(|e| bad(key, format!("`{}`: {e}", value.trim())))
}

impl RunConfig {
    /// Parses `key = value` lines; `#` starts a comment. Unset keys keep their defaults.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut config = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax { line: i + 1, text: raw.to_string() })?;
            config.set(key.trim(), value.trim())?;
        }
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io { path: path.display().to_string(), reason: e.to_string() })?;
        Self::parse(&text)
    }

    /// Sets one key. Call `validate` after the last override.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "primes" | "p" => self.primes = list(key, value)?,
            "ext_kinds" | "ext" => self.ext_kinds = list(key, value)?,
            "precision" => self.precision = scalar(key, value)?,
            "tolerance" => self.tolerance = scalar(key, value)?,
            "max_conductor" => self.max_conductor = scalar(key, value)?,
            "max_order" => self.max_order = scalar(key, value)?,
            "suites" => {
                let suites: Vec<Suite> = list(key, value)?;
                if suites.contains(&Suite::All) {
                    return Err(bad(key, "list the suites individually"));
                }
                self.suites = suites;
            }
            "seed" => self.seed = scalar(key, value)?,
            "weil_forms" => self.weil_forms = scalar(key, value)?,
            "weil_lambdas" => self.weil_lambdas = scalar(key, value)?,
            "epsilon_samples" => self.epsilon_samples = scalar(key, value)?,
            "cross_check_samples" => self.cross_check_samples = scalar(key, value)?,
            "lemma_231_instances" => self.lemma_231_instances = scalar(key, value)?,
            "params_samples" => self.params_samples = scalar(key, value)?,
            "ggp_pairs" => self.ggp_pairs = scalar(key, value)?,
            "threads" => self.threads = scalar(key, value)?,
            "timing" => self.timing = scalar(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.primes.is_empty() {
            return Err(bad("primes", "at least one prime is needed"));
        }
        for &p in &self.primes {
            if p < 3 || p % 2 == 0 || !(2..p).take_while(|d| d * d <= p).all(|d| p % d != 0) {
                return Err(bad("primes", format!("{p} is not an odd prime")));
            }
            if self.precision > FieldConfig::max_precision(p) {
                return Err(bad("precision", format!("{} exceeds the limit {} for p = {p}", self.precision, FieldConfig::max_precision(p))));
            }
        }
        if self.ext_kinds.is_empty() {
            return Err(bad("ext_kinds", "at least one extension is needed"));
        }
        if self.precision < 8 {
            return Err(bad("precision", format!("{} is below 8", self.precision)));
        }
        if !(1e-12..=1e-4).contains(&self.tolerance) {
            return Err(bad("tolerance", format!("{} is outside [1e-12, 1e-4]", self.tolerance)));
        }
        if self.max_conductor == 0 || self.max_order == 0 {
            return Err(bad("max_conductor", "sweep bounds must be positive"));
        }
        Ok(())
    }

    /// `(p, ext)` pairs in sweep order.
    pub fn fields(&self) -> Vec<(u64, ExtKind)> {
        self.primes.iter().flat_map(|&p| self.ext_kinds.iter().map(move |&e| (p, e))).collect()
    }
}
