use std::path::Path;
use std::sync::Arc;

use formbound::diffeo::{builtin, Diffeomorphism};
use formbound::fields::{CoeffFn, FormField, MaskFn};
use formbound::geometry::{metrics, orthonormal_frame, ChartDomain, Metric, MetricFn};
use formbound::multilinear::binomial;
use formbound::{Error, Matrix};

use crate::config::{BumpConfig, ChartConfig, FormConfig, MapConfig, MetricConfig, ScenarioConfig};
use crate::error::ConfigError;
use crate::expr::Expression;

/// Halton points used to validate maps and metrics at load time.
pub const VALIDATION_SAMPLES: usize = 2000;

/// A validated scenario with its charts and map built.
#[derive(Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub phi: Diffeomorphism,
}

/// Reads, parses and validates a scenario file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario, ConfigError> {
    Scenario::new(ScenarioConfig::from_path(path.as_ref())?)
}

impl Scenario {
    pub fn new(config: ScenarioConfig) -> Result<Self, ConfigError> {
        check_numbers(&config)?;
        let source = build_chart(&config.source, "source")?;
        let target = build_chart(config.target_chart(), "target")?;
        if source.dim() != target.dim() {
            return Err(ConfigError::invalid("target", "source and target dimensions differ"));
        }
        let phi = build_map(&config.map, source, target)?;
        for chart in [phi.source(), phi.target()] {
            for x in chart.halton_points(VALIDATION_SAMPLES / 4) {
                orthonormal_frame(chart, &x)?;
            }
        }
        phi.validate(VALIDATION_SAMPLES).map_err(|e| match e {
            Error::Orientation { point, det } => ConfigError::Orientation { point, det },
            Error::Argument(reason) => ConfigError::invalid("map", reason),
            other => ConfigError::Core(other),
        })?;
        let scenario = Self { config, phi };
        for k in scenario.config.degrees() {
            for chart in [scenario.phi.source(), scenario.phi.target()] {
                let form = scenario.form_on(chart, k)?;
                for x in chart.halton_points(16) {
                    form.coeffs_at(&x).map_err(|e| ConfigError::invalid(format!("form degree {k}"), e.to_string()))?;
                }
            }
        }
        Ok(scenario)
    }

    pub fn name(&self) -> &str {
        &self.config.name
    }

    pub fn dim(&self) -> usize {
        self.phi.dim()
    }

    /// The configured form of degree `k`, built on `chart`.
    pub fn form_on(&self, chart: &ChartDomain, k: usize) -> Result<FormField, ConfigError> {
        build_form(&self.config.form, chart, k)
    }
}

fn check_numbers(config: &ScenarioConfig) -> Result<(), ConfigError> {
    let n = config.dim();
    if n == 0 {
        return Err(ConfigError::invalid("source.lower", "at least one axis is required"));
    }
    if config.order == 0 {
        return Err(ConfigError::invalid("order", "must be positive"));
    }
    if config.samples == 0 {
        return Err(ConfigError::invalid("samples", "must be positive"));
    }
    if config.exponents.is_empty() {
        return Err(ConfigError::invalid("exponents", "list is empty"));
    }
    if let Some(k) = config.degrees().into_iter().find(|&k| k > n) {
        return Err(ConfigError::invalid("degrees", format!("degree {k} exceeds dimension {n}")));
    }
    if !(config.tolerance.sup >= 0.0 && config.tolerance.sup.is_finite()) {
        return Err(ConfigError::invalid("tolerance.sup", "must be a finite nonnegative number"));
    }
    Ok(())
}

fn build_chart(cfg: &ChartConfig, field: &str) -> Result<ChartDomain, ConfigError> {
    let n = cfg.lower.len();
    if cfg.upper.len() != n {
        return Err(ConfigError::invalid(format!("{field}.upper"), format!("expected {n} entries")));
    }
    let periodic = if cfg.periodic.is_empty() { vec![false; n] } else { cfg.periodic.clone() };
    if periodic.len() != n {
        return Err(ConfigError::invalid(format!("{field}.periodic"), format!("expected {n} entries")));
    }
    let metric = build_metric(&cfg.metric, n).map_err(|reason| ConfigError::invalid(format!("{field}.metric"), reason))?;
    ChartDomain::new(cfg.lower.clone(), cfg.upper.clone(), periodic, metric)
        .map_err(|e| ConfigError::invalid(field, e.to_string()))
}

fn build_metric(cfg: &MetricConfig, n: usize) -> Result<Metric, String> {
    match cfg {
        MetricConfig::Euclidean => Ok(Metric::Euclidean),
        MetricConfig::Diagonal { entries } => {
            if entries.len() != n {
                return Err(format!("expected {n} diagonal entries"));
            }
            metrics::diagonal(entries).map_err(|e| e.to_string())
        }
        MetricConfig::Builtin { name } => match name.as_str() {
            "euclidean" => Ok(Metric::Euclidean),
            "polar" => metrics::polar(n).map_err(|e| e.to_string()),
            "conformal_exp" => Ok(metrics::conformal_exp(n)),
            "wavy" => metrics::wavy(n).map_err(|e| e.to_string()),
            other => Err(format!("unknown builtin metric {other:?}")),
        },
        MetricConfig::Expression { entries } => {
            if entries.len() != n || entries.iter().any(|row| row.len() != n) {
                return Err(format!("expected a {n}x{n} table"));
            }
            let table = entries
                .iter()
                .map(|row| row.iter().map(|s| Expression::parse(s, n)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Metric::Field(Arc::new(move |x: &[f64]| {
                Matrix::from_fn(n, n, |i, j| table[i][j].eval(x).unwrap_or(f64::NAN))
            }) as MetricFn))
        }
    }
}

fn build_map(cfg: &MapConfig, source: ChartDomain, target: ChartDomain) -> Result<Diffeomorphism, ConfigError> {
    let n = source.dim();
    let invalid = |e: Error| ConfigError::invalid("map", e.to_string());
    let or_zeros = |v: &Vec<f64>| if v.is_empty() { vec![0.0; n] } else { v.clone() };
    match cfg {
        MapConfig::Identity => builtin::identity(source, target),
        MapConfig::Linear { matrix, offset } => {
            if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
                return Err(ConfigError::invalid("map.matrix", format!("expected a {n}x{n} matrix")));
            }
            let flat: Vec<f64> = matrix.iter().flatten().copied().collect();
            builtin::linear(source, target, Matrix::from_row_slice(n, n, &flat), or_zeros(offset))
        }
        MapConfig::Shear { s } => builtin::shear(source, target, *s),
        MapConfig::Rotation { theta, center } => builtin::rotation(source, target, *theta, or_zeros(center)),
        MapConfig::Sinusoidal { amplitude } => builtin::sinusoidal(source, target, *amplitude),
        MapConfig::RadialPower { gamma } => builtin::radial_power(source, target, *gamma),
        MapConfig::LogRadial => builtin::log_radial(source, target),
    }
    .map_err(invalid)
}

fn build_form(cfg: &FormConfig, chart: &ChartDomain, k: usize) -> Result<FormField, ConfigError> {
    let n = chart.dim();
    let rank = binomial(n, k);
    let key = k.to_string();
    let field = format!("form degree {k}");
    let base: CoeffFn = if let Some(list) = cfg.expressions.get(&key) {
        if list.len() != rank {
            return Err(ConfigError::invalid(format!("form.expressions.{key}"), format!("expected {rank} entries")));
        }
        let exprs = list
            .iter()
            .map(|s| Expression::parse(s, n))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|reason| ConfigError::invalid(format!("form.expressions.{key}"), reason))?;
        Arc::new(move |x: &[f64]| exprs.iter().map(|e| e.eval(x).map_err(Error::Argument)).collect())
    } else if let Some(values) = cfg.coefficients.get(&key) {
        if values.len() != rank {
            return Err(ConfigError::invalid(format!("form.coefficients.{key}"), format!("expected {rank} entries")));
        }
        let values = values.clone();
        Arc::new(move |_: &[f64]| Ok(values.clone()))
    } else {
        let value = cfg.value;
        Arc::new(move |_: &[f64]| Ok(vec![value; rank]))
    };
    let Some(bump) = &cfg.bump else {
        return FormField::from_fallible(chart.clone(), k, base).map_err(|e| ConfigError::invalid(field, e.to_string()));
    };
    let envelope = Envelope::new(bump, chart)?;
    let mask_env = envelope.clone();
    let coeffs: CoeffFn = Arc::new(move |x: &[f64]| {
        let w = envelope.weight(x);
        if w == 0.0 {
            return Ok(vec![0.0; rank]);
        }
        Ok(base(x)?.into_iter().map(|c| c * w).collect())
    });
    let mask: MaskFn = Arc::new(move |x: &[f64]| mask_env.weight(x) > 0.0);
    Ok(FormField::from_fallible(chart.clone(), k, coeffs).map_err(|e| ConfigError::invalid(field, e.to_string()))?.with_support(mask))
}

#[derive(Clone)]
struct Envelope {
    center: Vec<f64>,
    radius: f64,
    power: i32,
    lower: Vec<f64>,
    width: Vec<f64>,
    periodic: Vec<bool>,
}

impl Envelope {
    fn new(cfg: &BumpConfig, chart: &ChartDomain) -> Result<Self, ConfigError> {
        let n = chart.dim();
        if cfg.center.len() != n || cfg.center.iter().any(|c| !(0.0..=1.0).contains(c)) {
            return Err(ConfigError::invalid("form.bump.center", format!("expected {n} entries in [0, 1]")));
        }
        if !(cfg.radius > 0.0 && cfg.radius.is_finite()) {
            return Err(ConfigError::invalid("form.bump.radius", "must be positive"));
        }
        if cfg.power < 1 {
            return Err(ConfigError::invalid("form.bump.power", "must be at least 1"));
        }
        Ok(Self {
            center: cfg.center.clone(),
            radius: cfg.radius,
            power: cfg.power as i32,
            lower: chart.lower().to_vec(),
            width: chart.lower().iter().zip(chart.upper()).map(|(a, b)| b - a).collect(),
            periodic: chart.periodic().to_vec(),
        })
    }

    fn weight(&self, x: &[f64]) -> f64 {
        let mut s2 = 0.0;
        for i in 0..self.center.len() {
            let mut d = (x[i] - self.lower[i]) / self.width[i] - self.center[i];
            if self.periodic[i] {
                d -= d.round();
            }
            s2 += d * d;
        }
        let s2 = s2 / (self.radius * self.radius);
        if s2 >= 1.0 {
            0.0
        } else {
            (1.0 - s2).powi(self.power)
        }
    }
}
