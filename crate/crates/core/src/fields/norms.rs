use rayon::prelude::*;

use super::form::FormField;
use crate::diffeo::Diffeomorphism;
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::geometry::{integrate_values, ChartDomain, orthonormal_frame, sample_points, sup_of_values, volume_density, QuadratureRule};
use crate::multilinear::{comass_norm_with, AlternatingTensor, ComassOptions};

/// Default number of Halton points used for `L^∞` estimates.
pub const DEFAULT_SUP_SAMPLES: usize = 4096;

/// Pointwise comass norm `|ω|(x)` with respect to the chart metric.
pub fn pointwise_norm(omega: &FormField, x: &[f64]) -> Result<f64> {
    pointwise_norm_with(omega, x, &ComassOptions::default())
}

pub fn pointwise_norm_with(omega: &FormField, x: &[f64], opts: &ComassOptions) -> Result<f64> {
    let (n, k) = (omega.dim(), omega.degree());
    let coeffs = omega.coeffs_at(x)?;
    if k == 0 {
        return Ok(coeffs[0].abs());
    }
    if k == n {
        return Ok(coeffs[0].abs() / volume_density(omega.chart(), x)?);
    }
    let tensor = AlternatingTensor::new(n, k, coeffs)?;
    let framed = if omega.chart().is_euclidean() {
        tensor
    } else {
        tensor.pull_back(&orthonormal_frame(omega.chart(), x)?)?
    };
    Ok(comass_norm_with(&framed, opts))
}

/// `|ω|` at each point, evaluated in parallel.
pub fn pointwise_norms(omega: &FormField, points: &[Vec<f64>], opts: &ComassOptions) -> Result<Vec<f64>> {
    points.par_iter().map(|x| pointwise_norm_with(omega, x, opts)).collect()
}

/// `‖ω‖_p = (∫ |ω|^p μ)^{1/p}` by quadrature, or the sampled sup for `p = ∞`.
pub fn lp_norm(omega: &FormField, p: Exponent, rule: &QuadratureRule) -> Result<f64> {
    lp_norm_with(omega, p, rule, DEFAULT_SUP_SAMPLES, &ComassOptions::default())
}

pub fn lp_norm_with(
    omega: &FormField,
    p: Exponent,
    rule: &QuadratureRule,
    sup_samples: usize,
    opts: &ComassOptions,
) -> Result<f64> {
    match p {
        Exponent::Infinite => {
            if sup_samples < 1 {
                return Err(Error::Argument("sup estimate needs at least one sample".into()));
            }
            let pts = sample_points(omega.chart(), sup_samples, Some(rule));
            let values = pointwise_norms(omega, &pts, opts)?;
            sup_of_values(&pts, &values)
        }
        Exponent::Finite(_) => {
            let values = pointwise_norms(omega, &rule.nodes, opts)?;
            lp_from_node_values(omega.chart(), &values, p, rule)
        }
    }
}

/// Finite-`p` norm from pointwise norms already evaluated at the nodes.
pub fn lp_from_node_values(chart: &ChartDomain, norms: &[f64], p: Exponent, rule: &QuadratureRule) -> Result<f64> {
    let Exponent::Finite(pv) = p else {
        return Err(Error::Argument("quadrature norm needs a finite exponent".into()));
    };
    let powered: Vec<f64> = norms.iter().map(|v| v.powf(pv)).collect();
    let integral = integrate_values(chart, &powered, rule)?;
    Ok(integral.max(0.0).powf(1.0 / pv))
}

/// Worst pointwise violation found by [`verify_pointwise_bounds`].
#[derive(Debug, Clone, PartialEq)]
pub struct PointwiseReport {
    pub checked: usize,
    /// Largest `(lhs - rhs) / max(1, rhs)` over both inequalities.
    pub max_violation: f64,
    pub location: Vec<f64>,
    /// Which inequality attained `max_violation`.
    pub direction: BoundDirection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundDirection {
    Pullback,
    Pushforward,
}

/// Checks `|φ*η|(x) ≤ α₁⋯α_k(x) |η|(φ(x))` and
/// `|φ∗ω|(φ(x)) ≤ β₁⋯β_k(φ(x)) |ω|(x)` at each source point `x`.
///
/// `omega` lives on the source chart and `eta` on the target chart.
pub fn verify_pointwise_bounds(
    phi: &Diffeomorphism,
    omega: &FormField,
    eta: &FormField,
    points: &[Vec<f64>],
) -> Result<PointwiseReport> {
    let k = omega.degree();
    if eta.degree() != k {
        return Err(Error::Shape("source and target forms must share a degree".into()));
    }
    let pulled = super::form::pullback(phi, eta)?;
    let pushed = super::form::pushforward(phi, omega)?;
    let opts = ComassOptions::default();
    let rows: Vec<[(f64, BoundDirection); 2]> = points
        .par_iter()
        .map(|x| -> Result<_> {
            let y = phi.forward(x);
            let alpha = phi.singular_spectrum(x)?;
            let beta = phi.inverse_spectrum(&y)?;
            let pull_lhs = pointwise_norm_with(&pulled, x, &opts)?;
            let pull_rhs = alpha.top(k) * pointwise_norm_with(eta, &y, &opts)?;
            let push_lhs = pointwise_norm_with(&pushed, &y, &opts)?;
            let push_rhs = beta.top(k) * pointwise_norm_with(omega, x, &opts)?;
            Ok([
                ((pull_lhs - pull_rhs) / pull_rhs.max(1.0), BoundDirection::Pullback),
                ((push_lhs - push_rhs) / push_rhs.max(1.0), BoundDirection::Pushforward),
            ])
        })
        .collect::<Result<_>>()?;
    let mut report = PointwiseReport {
        checked: points.len(),
        max_violation: f64::NEG_INFINITY,
        location: vec![],
        direction: BoundDirection::Pullback,
    };
    for (x, row) in points.iter().zip(rows) {
        for (v, dir) in row {
            if v > report.max_violation {
                report.max_violation = v;
                report.location = x.clone();
                report.direction = dir;
            }
        }
    }
    Ok(report)
}
