use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use formbound::Exponent;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ConfigError;

pub const DEFAULT_ORDER: usize = 16;
pub const DEFAULT_SAMPLES: usize = 4096;
pub const DEFAULT_SEED: u64 = 0x5eed_c0de;

/// One scenario file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    /// `"pass"` for ordinary scenarios, `"error"` for fixtures that are
    /// expected to fail with a per-tuple error.
    #[serde(default)]
    pub expect: Expectation,
    pub source: ChartConfig,
    /// Defaults to the source chart.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<ChartConfig>,
    pub map: MapConfig,
    #[serde(default)]
    pub form: FormConfig,
    #[serde(default = "default_exponents")]
    pub exponents: Vec<ExponentValue>,
    /// Defaults to every degree `0..=n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<usize>>,
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub tolerance: ToleranceConfig,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    #[default]
    Pass,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartConfig {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Defaults to all `false`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub periodic: Vec<bool>,
    #[serde(default)]
    pub metric: MetricConfig,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MetricConfig {
    #[default]
    Euclidean,
    Diagonal {
        entries: Vec<f64>,
    },
    /// `polar`, `conformal_exp` or `wavy`.
    Builtin {
        name: String,
    },
    /// Full matrix of expressions in `x1..xn`, row by row.
    Expression {
        entries: Vec<Vec<String>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapConfig {
    Identity,
    Linear {
        matrix: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        offset: Vec<f64>,
    },
    Shear {
        s: f64,
    },
    Rotation {
        theta: f64,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        center: Vec<f64>,
    },
    Sinusoidal {
        amplitude: f64,
    },
    RadialPower {
        gamma: f64,
    },
    LogRadial,
}

/// Coefficients of the form of each degree. For degree `k` the first match
/// wins: `expressions["k"]`, `coefficients["k"]`, then every component
/// equal to `value`. An optional bump envelope multiplies all of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormConfig {
    #[serde(default = "one")]
    pub value: f64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub coefficients: BTreeMap<String, Vec<f64>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub expressions: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bump: Option<BumpConfig>,
}

impl Default for FormConfig {
    fn default() -> Self {
        Self { value: 1.0, coefficients: BTreeMap::new(), expressions: BTreeMap::new(), bump: None }
    }
}

/// Envelope `(1 - s²)^power` for `s < 1`, zero elsewhere, where `s` is the
/// distance to `center` divided by `radius`, both in box coordinates
/// rescaled to `[0, 1]` (periodic axes wrap).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BumpConfig {
    pub center: Vec<f64>,
    pub radius: f64,
    #[serde(default = "default_power")]
    pub power: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceConfig {
    /// Floor on the relative tolerance of each certificate.
    #[serde(default = "default_sup_tolerance")]
    pub sup: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { sup: default_sup_tolerance() }
    }
}

/// An exponent written either as a number or as a string (`"inf"`, `"3/2"`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentValue(pub Exponent);

impl fmt::Display for ExponentValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for ExponentValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            Exponent::Finite(p) => s.serialize_f64(p),
            Exponent::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExponentValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Float(f64),
            Text(String),
        }
        let parsed = match Raw::deserialize(d)? {
            Raw::Int(i) => Exponent::new(i as f64),
            Raw::Float(f) => Exponent::new(f),
            Raw::Text(t) => t.parse(),
        };
        parsed.map(ExponentValue).map_err(serde::de::Error::custom)
    }
}

fn default_exponents() -> Vec<ExponentValue> {
    [Exponent::Finite(1.0), Exponent::Finite(1.5), Exponent::Finite(2.0), Exponent::Finite(3.0), Exponent::Infinite]
        .into_iter()
        .map(ExponentValue)
        .collect()
}

fn default_order() -> usize {
    DEFAULT_ORDER
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn default_sup_tolerance() -> f64 {
    1e-6
}

fn default_power() -> u32 {
    6
}

fn one() -> f64 {
    1.0
}

impl ScenarioConfig {
    /// Parses scenario TOML without building the map.
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map_or((0, 0), |span| line_column(text, span.start));
            ConfigError::Parse { line, column, message: e.message().to_string() }
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario configs always serialize")
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), message: e.to_string() })?;
        Self::from_toml(&text)
    }

    pub fn dim(&self) -> usize {
        self.source.lower.len()
    }

    pub fn target_chart(&self) -> &ChartConfig {
        self.target.as_ref().unwrap_or(&self.source)
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.degrees.clone().unwrap_or_else(|| (0..=self.dim()).collect())
    }

    pub fn exponents(&self) -> Vec<Exponent> {
        self.exponents.iter().map(|e| e.0).collect()
    }
}

/// One-based line and column of a byte offset.
fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}
