//! Suite configuration: JSON in, validated types out, with line/field
//! diagnostics on every rejection.

use std::fmt;

use kilab_core::catalog::TestFunction;
use kilab_core::sites::{PerturbationRule, KADEC_LIMIT};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::battery::BatteryConfig;

pub const DEFAULT_SEED: u64 = 1729;

/// A rejected config: where, which field, why.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub column: usize,
    /// Dotted path to the offending field (`batteries[2].rate_sinc.h_list`), or `.` for the root.
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error at line {}, column {}, field `{}`: {}", self.line, self.column, self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

/// Parses `text` as `T`, reporting the position and field path of the first problem.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T, ConfigError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let field = e.path().to_string();
        from_json_error(field, e.into_inner())
    })?;
    de.end().map_err(|e| from_json_error(".".into(), e))?;
    Ok(value)
}

fn from_json_error(field: String, e: serde_json::Error) -> ConfigError {
    let full = e.to_string();
    // serde_json appends " at line L column C"; we report those separately
    let message = match full.rfind(" at line ") {
        Some(i) => full[..i].to_string(),
        None => full,
    };
    ConfigError { line: e.line(), column: e.column(), field, message }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Worker threads; absent means one per core. Reports do not depend on it.
    #[serde(default)]
    pub threads: Option<usize>,
    pub batteries: Vec<BatteryConfig>,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

impl SuiteConfig {
    /// All twelve batteries with their default settings.
    pub fn default_suite() -> Self {
        SuiteConfig { seed: DEFAULT_SEED, threads: None, batteries: BatteryConfig::all_defaults() }
    }
}

/// A catalog id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct FnId(pub TestFunction);

impl TryFrom<String> for FnId {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        TestFunction::from_id(&s).map(FnId).ok_or_else(|| {
            let known: Vec<&str> = kilab_core::catalog::CATALOG.iter().map(|g| g.id()).collect();
            format!("unknown catalog id `{s}` (known: {})", known.join(", "))
        })
    }
}

impl From<FnId> for String {
    fn from(f: FnId) -> String {
        f.0.id().to_string()
    }
}

/// Strictly decreasing step sizes in (0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct HList(pub Vec<f64>);

impl TryFrom<Vec<f64>> for HList {
    type Error = String;
    fn try_from(v: Vec<f64>) -> Result<Self, String> {
        if v.is_empty() {
            return Err("h_list must not be empty".into());
        }
        if let Some(h) = v.iter().find(|h| !(**h > 0.0 && **h <= 1.0)) {
            return Err(format!("h = {h} is outside (0, 1]"));
        }
        if v.windows(2).any(|w| w[1] >= w[0]) {
            return Err("h_list must be strictly decreasing".into());
        }
        Ok(HList(v))
    }
}

impl From<HList> for Vec<f64> {
    fn from(h: HList) -> Vec<f64> {
        h.0
    }
}

/// A finite positive real.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Positive(pub f64);

impl TryFrom<f64> for Positive {
    type Error = String;
    fn try_from(v: f64) -> Result<Self, String> {
        if v > 0.0 && v.is_finite() {
            Ok(Positive(v))
        } else {
            Err(format!("{v} must be a finite positive number"))
        }
    }
}

impl From<Positive> for f64 {
    fn from(p: Positive) -> f64 {
        p.0
    }
}

/// Perturbation amplitude in `[0, 1/4)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Amplitude(pub f64);

impl TryFrom<f64> for Amplitude {
    type Error = String;
    fn try_from(v: f64) -> Result<Self, String> {
        if (0.0..KADEC_LIMIT).contains(&v) {
            Ok(Amplitude(v))
        } else {
            Err(format!("amplitude {v} must lie in [0, {KADEC_LIMIT})"))
        }
    }
}

impl From<Amplitude> for f64 {
    fn from(a: Amplitude) -> f64 {
        a.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    Zero,
    Sinusoidal,
    SeededUniform,
}

/// How the unscaled sites are perturbed off the integers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SitesConfig {
    pub rule: RuleKind,
    pub amplitude: Amplitude,
    pub frequency: f64,
    pub phase: f64,
    pub seed: u64,
}

impl Default for SitesConfig {
    fn default() -> Self {
        SitesConfig { rule: RuleKind::Sinusoidal, amplitude: Amplitude(0.2), frequency: 1.0, phase: 0.0, seed: 0 }
    }
}

impl SitesConfig {
    pub fn with_phase(phase: f64) -> Self {
        SitesConfig { phase, ..Self::default() }
    }

    pub fn rule(&self) -> PerturbationRule {
        match self.rule {
            RuleKind::Zero => PerturbationRule::Zero,
            RuleKind::Sinusoidal => PerturbationRule::Sinusoidal {
                amplitude: self.amplitude.0,
                frequency: self.frequency,
                phase: self.phase,
            },
            RuleKind::SeededUniform => PerturbationRule::SeededUniform { amplitude: self.amplitude.0, seed: self.seed },
        }
    }
}
