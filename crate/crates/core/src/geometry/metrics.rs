//! Named metric fields.

use std::sync::Arc;

use super::chart::{Metric, MetricFn};
use crate::error::{Error, Result};
use crate::multilinear::Matrix;

/// Constant diagonal metric.
pub fn diagonal(entries: &[f64]) -> Result<Metric> {
    if entries.iter().any(|e| !(*e > 0.0) || !e.is_finite()) {
        return Err(Error::Argument(format!("diagonal metric entries must be positive: {entries:?}")));
    }
    Ok(Metric::Constant(Matrix::from_diagonal(&nalgebra::DVector::from_column_slice(entries))))
}

/// Polar / cylindrical metric `dr² + r² dθ² (+ dz² …)` with `r = x₁`, `θ = x₂`.
pub fn polar(n: usize) -> Result<Metric> {
    if n < 2 {
        return Err(Error::Argument("polar metric needs at least two axes".into()));
    }
    Ok(Metric::Field(Arc::new(move |x: &[f64]| {
        let mut g = Matrix::identity(n, n);
        g[(1, 1)] = x[0] * x[0];
        g
    }) as MetricFn))
}

/// Conformally flat metric `e^{2x₁} δ`.
pub fn conformal_exp(n: usize) -> Metric {
    Metric::Field(Arc::new(move |x: &[f64]| Matrix::identity(n, n) * (2.0 * x[0]).exp()) as MetricFn)
}

/// Smooth, periodic, non-diagonal metric
/// `g_ii = 1 + ¼ sin x_i`, `g_ij = ⅕ cos(x_i + x_j)` (diagonally dominant for `n ≤ 3`).
pub fn wavy(n: usize) -> Result<Metric> {
    if n > 3 {
        return Err(Error::Argument("wavy metric is only positive-definite for n <= 3".into()));
    }
    Ok(Metric::Field(Arc::new(move |x: &[f64]| {
        Matrix::from_fn(n, n, |i, j| {
            if i == j {
                1.0 + 0.25 * x[i].sin()
            } else {
                0.2 * (x[i] + x[j]).cos()
            }
        })
    }) as MetricFn))
}
