use std::io::Write;
use std::path::Path;

use formbound::certify::{BoundCertificate, Certifier, CertifyOptions, Direction};
use formbound::multilinear::ComassOptions;
use formbound::Exponent;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExponentValue;
use crate::error::OutputError;
use crate::scenario::Scenario;

/// Which transports to certify.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum DirectionChoice {
    Push,
    Pull,
    #[default]
    Both,
}

impl DirectionChoice {
    pub fn directions(self) -> Vec<Direction> {
        match self {
            Self::Push => vec![Direction::Pushforward],
            Self::Pull => vec![Direction::Pullback],
            Self::Both => vec![Direction::Pushforward, Direction::Pullback],
        }
    }
}

/// Overrides applied on top of the scenario file.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub direction: DirectionChoice,
    pub order: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

/// One `(direction, k, p)` tuple of a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateRecord {
    pub scenario: String,
    pub direction: String,
    pub k: usize,
    pub p: ExponentValue,
    pub q: ExponentValue,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<CertificateValues>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateValues {
    pub norm_source: f64,
    pub norm_transported: f64,
    pub norm_source_refined: f64,
    pub norm_transported_refined: f64,
    pub lower_factor: f64,
    pub upper_factor: f64,
    pub masked: bool,
    pub r_low: f64,
    pub r_up: f64,
    pub quadrature_budget: f64,
    pub epsilon: f64,
}

impl From<&BoundCertificate> for CertificateValues {
    fn from(c: &BoundCertificate) -> Self {
        Self {
            norm_source: c.norm_source,
            norm_transported: c.norm_transported,
            norm_source_refined: c.norm_source_refined,
            norm_transported_refined: c.norm_transported_refined,
            lower_factor: c.factors.lower,
            upper_factor: c.factors.upper,
            masked: c.factors.masked,
            r_low: c.r_low,
            r_up: c.r_up,
            quadrature_budget: c.quadrature_budget,
            epsilon: c.epsilon,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Environment {
    pub version: String,
    pub dimension: usize,
    pub order: usize,
    pub refined_order: usize,
    pub samples: usize,
    pub seed: u64,
    pub sup_tolerance: f64,
    pub directions: Vec<String>,
    pub degrees: Vec<usize>,
    pub exponents: Vec<ExponentValue>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub environment: Environment,
    pub certificates: Vec<CertificateRecord>,
    pub summary: Summary,
}

impl RunReport {
    pub fn all_passed(&self) -> bool {
        self.summary.passed == self.summary.total
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    /// Writes the JSON report through a temporary file and a rename.
    pub fn write(&self, path: &Path) -> Result<(), OutputError> {
        write_atomic(path, self.to_json().as_bytes())
    }
}

/// Certifies every requested tuple of `scenario`. A failing tuple is
/// recorded as an error and never stops the others.
pub fn run(scenario: &Scenario, options: &RunOptions) -> RunReport {
    let cfg = &scenario.config;
    let certify_options = CertifyOptions {
        order: options.order.unwrap_or(cfg.order),
        samples: options.samples.unwrap_or(cfg.samples),
        sup_tolerance: cfg.tolerance.sup,
        comass: ComassOptions { seed: options.seed.unwrap_or(cfg.seed), ..ComassOptions::default() },
    };
    let directions = options.direction.directions();
    let degrees = cfg.degrees();
    let exponents = cfg.exponents();
    let jobs: Vec<(Direction, usize)> =
        directions.iter().flat_map(|&d| degrees.iter().map(move |&k| (d, k))).collect();
    let certificates: Vec<CertificateRecord> = jobs
        .par_iter()
        .map(|&(direction, k)| certify_tuple_group(scenario, direction, k, &exponents, &certify_options))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let mut summary = Summary { total: certificates.len(), ..Summary::default() };
    for c in &certificates {
        match c.verdict {
            Verdict::Pass => summary.passed += 1,
            Verdict::Fail => summary.failed += 1,
            Verdict::Error => summary.errors += 1,
        }
    }
    RunReport {
        scenario: cfg.name.clone(),
        environment: Environment {
            version: env!("CARGO_PKG_VERSION").to_string(),
            dimension: scenario.dim(),
            order: certify_options.order,
            refined_order: 2 * certify_options.order,
            samples: certify_options.samples,
            seed: certify_options.comass.seed,
            sup_tolerance: certify_options.sup_tolerance,
            directions: directions.iter().map(|d| d.to_string()).collect(),
            degrees,
            exponents: exponents.iter().copied().map(ExponentValue).collect(),
        },
        certificates,
        summary,
    }
}

fn certify_tuple_group(
    scenario: &Scenario,
    direction: Direction,
    k: usize,
    exponents: &[Exponent],
    options: &CertifyOptions,
) -> Vec<CertificateRecord> {
    let record = |p: Exponent, outcome: Result<BoundCertificate, String>| {
        let (verdict, error, values) = match outcome {
            Ok(c) => (if c.passed { Verdict::Pass } else { Verdict::Fail }, None, Some(CertificateValues::from(&c))),
            Err(e) => (Verdict::Error, Some(e), None),
        };
        CertificateRecord {
            scenario: scenario.name().to_string(),
            direction: direction.to_string(),
            k,
            p: ExponentValue(p),
            q: ExponentValue(p.conjugate()),
            verdict,
            error,
            values,
        }
    };
    let chart = match direction {
        Direction::Pushforward => scenario.phi.source(),
        Direction::Pullback => scenario.phi.target(),
    };
    let certifier = scenario
        .form_on(chart, k)
        .map_err(|e| e.to_string())
        .and_then(|form| {
            Certifier::new(scenario.name(), &scenario.phi, direction, &form, options).map_err(|e| e.to_string())
        });
    match certifier {
        Ok(c) => exponents.iter().map(|&p| record(p, c.certify(p).map_err(|e| e.to_string()))).collect(),
        Err(e) => exponents.iter().map(|&p| record(p, Err(e.clone()))).collect(),
    }
}

pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), OutputError> {
    let wrap = |source| OutputError { path: path.display().to_string(), source };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(wrap)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(wrap)?;
    tmp.write_all(bytes).map_err(wrap)?;
    tmp.persist(path).map_err(|e| wrap(e.error))?;
    Ok(())
}
