use rayon::prelude::*;

use super::chart::ChartDomain;
use super::frame::volume_density;
use crate::error::{Error, Result};

/// Tensor-product quadrature rule on a chart box (coordinate measure).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub order: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on `P_m`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(m, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    (nodes, weights)
}

/// `(P_m(x), P_m'(x))` by the three-term recurrence.
fn legendre(m: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if m == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=m {
        let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Tensor-product rule with `order` points per axis: Gauss–Legendre on
/// bounded axes, the uniform (trapezoidal) rule on periodic ones.
pub fn quadrature_nodes(chart: &ChartDomain, order: usize) -> Result<QuadratureRule> {
    if order < 1 {
        return Err(Error::Argument("quadrature order must be at least 1".into()));
    }
    let n = chart.dim();
    let (gl_x, gl_w) = gauss_legendre(order);
    let axes: Vec<(Vec<f64>, Vec<f64>)> = (0..n)
        .map(|i| {
            let (a, b) = (chart.lower()[i], chart.upper()[i]);
            let len = b - a;
            if chart.periodic()[i] {
                let h = len / order as f64;
                ((0..order).map(|j| a + j as f64 * h).collect(), vec![h; order])
            } else {
                (
                    gl_x.iter().map(|t| a + 0.5 * len * (t + 1.0)).collect(),
                    gl_w.iter().map(|w| 0.5 * len * w).collect(),
                )
            }
        })
        .collect();

    let total = order.pow(n as u32);
    let mut nodes = Vec::with_capacity(total);
    let mut weights = Vec::with_capacity(total);
    let mut counter = vec![0usize; n];
    for _ in 0..total {
        nodes.push((0..n).map(|i| axes[i].0[counter[i]]).collect());
        weights.push((0..n).map(|i| axes[i].1[counter[i]]).product());
        for c in counter.iter_mut().rev() {
            *c += 1;
            if *c < order {
                break;
            }
            *c = 0;
        }
    }
    Ok(QuadratureRule { nodes, weights, order })
}

/// Riemannian volume density at every node of `rule`.
pub fn node_densities(chart: &ChartDomain, rule: &QuadratureRule) -> Result<Vec<f64>> {
    rule.nodes.par_iter().map(|x| volume_density(chart, x)).collect()
}

/// `Σ wᵢ f(xᵢ) √det g(xᵢ)`; `f` may be evaluated concurrently.
pub fn integrate<F>(chart: &ChartDomain, f: F, rule: &QuadratureRule) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let values: Vec<f64> = rule.nodes.par_iter().map(|x| f(x)).collect();
    integrate_values(chart, &values, rule)
}

/// Like [`integrate`] with the integrand already evaluated at the nodes.
pub fn integrate_values(chart: &ChartDomain, values: &[f64], rule: &QuadratureRule) -> Result<f64> {
    if values.len() != rule.len() {
        return Err(Error::Shape(format!("{} values for {} nodes", values.len(), rule.len())));
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { value: values[i], location: rule.nodes[i].clone() });
    }
    let densities = node_densities(chart, rule)?;
    // Fixed summation order keeps results reproducible.
    Ok(values.iter().zip(&rule.weights).zip(&densities).map(|((v, w), d)| v * w * d).sum())
}

/// Points used for sup-norm estimates: `samples` Halton points, the box
/// corners, then the nodes of `rule` if given. The Halton prefix is nested
/// as `samples` grows.
pub fn sample_points(chart: &ChartDomain, samples: usize, rule: Option<&QuadratureRule>) -> Vec<Vec<f64>> {
    let mut pts = chart.halton_points(samples);
    pts.extend(corners(chart));
    if let Some(rule) = rule {
        pts.extend(rule.nodes.iter().cloned());
    }
    pts
}

/// Maximum of `|f|` over [`sample_points`].
pub fn sup_norm_estimate<F>(
    chart: &ChartDomain,
    f: F,
    samples: usize,
    rule: Option<&QuadratureRule>,
) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if samples < 1 {
        return Err(Error::Argument("sup estimate needs at least one sample".into()));
    }
    let pts = sample_points(chart, samples, rule);
    let values: Vec<f64> = pts.par_iter().map(|x| f(x)).collect();
    sup_of_values(&pts, &values)
}

/// Vertices of the box; periodic axes contribute only their lower end.
fn corners(chart: &ChartDomain) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::with_capacity(chart.dim())];
    for i in 0..chart.dim() {
        let ends: &[f64] = if chart.periodic()[i] {
            &chart.lower()[i..=i]
        } else {
            &[chart.lower()[i], chart.upper()[i]]
        };
        out = out
            .into_iter()
            .flat_map(|p| {
                ends.iter().map(move |e| {
                    let mut q = p.clone();
                    q.push(*e);
                    q
                })
            })
            .collect();
    }
    out
}

pub(crate) fn sup_of_values(points: &[Vec<f64>], values: &[f64]) -> Result<f64> {
    let mut best = 0.0f64;
    for (x, v) in points.iter().zip(values) {
        if !v.is_finite() {
            return Err(Error::NonFinite { value: *v, location: x.clone() });
        }
        best = best.max(v.abs());
    }
    Ok(best)
}
