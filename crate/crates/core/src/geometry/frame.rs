use super::chart::ChartDomain;
use crate::error::{Error, Result};
use crate::multilinear::Matrix;

/// Positively oriented `g`-orthonormal frame at `x`, as the columns of `E`.
///
/// With `g = L Lᵀ` (Cholesky), `E = L⁻ᵀ` satisfies `Eᵀ g E = I`.
pub fn orthonormal_frame(chart: &ChartDomain, x: &[f64]) -> Result<Matrix> {
    let n = chart.dim();
    if chart.is_euclidean() {
        return Ok(Matrix::identity(n, n));
    }
    let g = chart.metric_at(x)?;
    let chol = g.cholesky().ok_or_else(|| Error::MetricDegenerate(x.to_vec()))?;
    let lt = chol.l().transpose();
    let mut e = lt
        .solve_upper_triangular(&Matrix::identity(n, n))
        .ok_or_else(|| Error::MetricDegenerate(x.to_vec()))?;
    if e.determinant() < 0.0 {
        e.column_mut(n - 1).neg_mut();
    }
    Ok(e)
}

/// Riemannian volume density `√det g(x)`.
pub fn volume_density(chart: &ChartDomain, x: &[f64]) -> Result<f64> {
    if chart.is_euclidean() {
        return Ok(1.0);
    }
    let g = chart.metric_at(x)?;
    let chol = g.cholesky().ok_or_else(|| Error::MetricDegenerate(x.to_vec()))?;
    let density: f64 = chol.l_dirty().diagonal().iter().product();
    if !(density > 0.0) || !density.is_finite() {
        return Err(Error::MetricDegenerate(x.to_vec()));
    }
    Ok(density)
}
