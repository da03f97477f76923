use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use formbound::fields::pointwise_norm;
use formbound::geometry::ChartDomain;
use formbound::Exponent;

use crate::error::OutputError;
use crate::report::write_atomic;
use crate::scenario::Scenario;

/// Column groups of the pointwise CSV export.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsvField {
    /// `alpha_1..alpha_n` at the grid point.
    Alpha,
    /// `beta_1..beta_n` at the image of the grid point.
    Beta,
    /// Jacobian determinant.
    Jacobian,
    /// `norm_k<k>`: pointwise norm of the configured form of each degree.
    PointwiseNorm,
    /// `lower_k<k>_p<p>` and `upper_k<k>_p<p>`: the quantities whose sups
    /// give the bound factors.
    FactorIntegrands,
}

impl FromStr for CsvField {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "alpha_i" | "alpha" => Ok(Self::Alpha),
            "beta_i" | "beta" => Ok(Self::Beta),
            "jacobian" => Ok(Self::Jacobian),
            "pointwise_norm" => Ok(Self::PointwiseNorm),
            "factor_integrands" => Ok(Self::FactorIntegrands),
            other => Err(format!("unknown CSV field {other:?}")),
        }
    }
}

pub const ALL_FIELDS: [CsvField; 5] =
    [CsvField::Alpha, CsvField::Beta, CsvField::Jacobian, CsvField::PointwiseNorm, CsvField::FactorIntegrands];

/// Cell-centred tensor grid with `per_axis` points along each axis.
pub fn midpoint_grid(chart: &ChartDomain, per_axis: usize) -> Vec<Vec<f64>> {
    let mut out = vec![vec![]];
    for i in 0..chart.dim() {
        let (lo, hi) = (chart.lower()[i], chart.upper()[i]);
        let h = (hi - lo) / per_axis as f64;
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<f64>| {
                (0..per_axis).map(move |j| {
                    let mut q = prefix.clone();
                    q.push(lo + (j as f64 + 0.5) * h);
                    q
                })
            })
            .collect();
    }
    out
}

/// 17 significant digits.
fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn exponent_label(p: Exponent) -> String {
    match p {
        Exponent::Infinite => "inf".to_string(),
        Exponent::Finite(v) => v.to_string(),
    }
}

/// Writes one row per grid point (source coordinates `x1..xn` first).
pub fn emit_pointwise_csv(
    scenario: &Scenario,
    fields: &[CsvField],
    grid: &[Vec<f64>],
    path: &Path,
) -> Result<(), Box<dyn std::error::Error + Send + Sync>> {
    let phi = &scenario.phi;
    let n = phi.dim();
    let degrees = scenario.config.degrees();
    let exponents = scenario.config.exponents();
    let images: Vec<Vec<f64>> = grid.iter().map(|x| phi.forward(x)).collect();
    let forms = degrees
        .iter()
        .map(|&k| scenario.form_on(phi.source(), k))
        .collect::<Result<Vec<_>, _>>()?;

    let mut header: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    for field in fields {
        match field {
            CsvField::Alpha => header.extend((1..=n).map(|i| format!("alpha_{i}"))),
            CsvField::Beta => header.extend((1..=n).map(|i| format!("beta_{i}"))),
            CsvField::Jacobian => header.push("jacobian".into()),
            CsvField::PointwiseNorm => header.extend(degrees.iter().map(|k| format!("norm_k{k}"))),
            CsvField::FactorIntegrands => {
                for k in &degrees {
                    for p in &exponents {
                        header.push(format!("lower_k{k}_p{}", exponent_label(*p)));
                        header.push(format!("upper_k{k}_p{}", exponent_label(*p)));
                    }
                }
            }
        }
    }
    let mut text = header.join(",");
    text.push('\n');
    for (i, x) in grid.iter().enumerate() {
        let mut row: Vec<String> = x.iter().map(|v| num(*v)).collect();
        let spectrum = phi.singular_spectrum(x)?;
        for field in fields {
            match field {
                CsvField::Alpha => row.extend(spectrum.alphas.iter().map(|v| num(*v))),
                CsvField::Beta => row.extend(phi.inverse_spectrum(&images[i])?.alphas.iter().map(|v| num(*v))),
                CsvField::Jacobian => row.push(num(phi.jacobian_determinant(x)?)),
                CsvField::PointwiseNorm => {
                    for form in &forms {
                        row.push(num(pointwise_norm(form, x)?));
                    }
                }
                CsvField::FactorIntegrands => {
                    for &k in &degrees {
                        for &p in &exponents {
                            let (ip, iq) = (p.reciprocal(), p.conjugate().reciprocal());
                            let a = &spectrum.alphas;
                            let prod = |r: std::ops::Range<usize>| a[r].iter().product::<f64>();
                            row.push(num(prod(0..k).powf(iq) * prod(k..n).powf(-ip)));
                            row.push(num(prod(0..n - k).powf(ip) * prod(n - k..n).powf(-iq)));
                        }
                    }
                }
            }
        }
        let _ = writeln!(text, "{}", row.join(","));
    }
    write_atomic(path, text.as_bytes()).map_err(|e: OutputError| e.into())
}
