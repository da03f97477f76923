//! Ready-made diffeomorphisms with exact inverses and analytic Jacobians.
//!
//! The charts are supplied by the caller; [`Diffeomorphism::validate`] checks
//! that a map actually carries the source box onto the target box.

use std::sync::Arc;

use super::map::{Diffeomorphism, MatrixMap, PointMap};
use crate::error::{Error, Result};
use crate::geometry::ChartDomain;
use crate::multilinear::Matrix;

pub fn identity(source: ChartDomain, target: ChartDomain) -> Result<Diffeomorphism> {
    let n = source.dim();
    Ok(Diffeomorphism::new(
        source,
        target,
        Arc::new(|x: &[f64]| x.to_vec()),
        Arc::new(|y: &[f64]| y.to_vec()),
    )?
    .with_jacobian(Arc::new(move |_: &[f64]| Matrix::identity(n, n)))
    .with_inverse_jacobian(Arc::new(move |_: &[f64]| Matrix::identity(n, n))))
}

/// Affine map `y = A x + b`.
pub fn linear(source: ChartDomain, target: ChartDomain, a: Matrix, offset: Vec<f64>) -> Result<Diffeomorphism> {
    let n = source.dim();
    if a.nrows() != n || a.ncols() != n || offset.len() != n {
        return Err(Error::Shape(format!("affine map on R^{n} needs a {n}x{n} matrix and {n} offsets")));
    }
    let a_inv = a
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Argument("linear map matrix is singular".into()))?;
    let b = nalgebra::DVector::from_vec(offset);
    let (fa, fb) = (a.clone(), b.clone());
    let forward: PointMap =
        Arc::new(move |x: &[f64]| (&fa * nalgebra::DVector::from_column_slice(x) + &fb).as_slice().to_vec());
    let (ia, ib) = (a_inv.clone(), b);
    let inverse: PointMap =
        Arc::new(move |y: &[f64]| (&ia * (nalgebra::DVector::from_column_slice(y) - &ib)).as_slice().to_vec());
    Ok(Diffeomorphism::new(source, target, forward, inverse)?
        .with_jacobian(Arc::new(move |_: &[f64]| a.clone()))
        .with_inverse_jacobian(Arc::new(move |_: &[f64]| a_inv.clone())))
}

/// Planar shear `(x₁ + s x₂, x₂)`, extended by the identity in higher dimensions.
pub fn shear(source: ChartDomain, target: ChartDomain, s: f64) -> Result<Diffeomorphism> {
    let n = source.dim();
    if n < 2 {
        return Err(Error::Argument("shear needs at least two axes".into()));
    }
    let mut a = Matrix::identity(n, n);
    a[(0, 1)] = s;
    linear(source, target, a, vec![0.0; n])
}

/// Rotation by `theta` in the first coordinate plane about the point `center`.
pub fn rotation(source: ChartDomain, target: ChartDomain, theta: f64, center: Vec<f64>) -> Result<Diffeomorphism> {
    let n = source.dim();
    if n < 2 || center.len() != n {
        return Err(Error::Argument("rotation needs at least two axes and a full center".into()));
    }
    let mut a = Matrix::identity(n, n);
    let (s, c) = theta.sin_cos();
    a[(0, 0)] = c;
    a[(0, 1)] = -s;
    a[(1, 0)] = s;
    a[(1, 1)] = c;
    let c_vec = nalgebra::DVector::from_vec(center);
    let offset = &c_vec - &a * &c_vec;
    linear(source, target, a, offset.as_slice().to_vec())
}

/// Nonlinear torus map on `[0, 2π)^n`: each axis is first bent by
/// `x ↦ x + a sin x`, then the axes are coupled by the cyclic sequence of
/// shears `v_i ← v_i + a sin v_{i+1}`. Requires `|a| < 1`.
pub fn sinusoidal(source: ChartDomain, target: ChartDomain, a: f64) -> Result<Diffeomorphism> {
    if !(a.abs() < 1.0) {
        return Err(Error::Argument(format!("sinusoidal amplitude must satisfy |a| < 1, got {a}")));
    }
    let n = source.dim();
    let forward: PointMap = Arc::new(move |x: &[f64]| sinusoidal_forward(x, a).0);
    let inverse: PointMap = Arc::new(move |y: &[f64]| {
        let mut v = y.to_vec();
        if n > 1 {
            for i in (0..n).rev() {
                let j = (i + 1) % n;
                v[i] -= a * v[j].sin();
            }
        }
        v.iter().map(|u| kepler_inverse(*u, a)).collect()
    });
    let jacobian: MatrixMap = Arc::new(move |x: &[f64]| sinusoidal_forward(x, a).1);
    Ok(Diffeomorphism::new(source, target, forward, inverse)?.with_jacobian(jacobian))
}

fn sinusoidal_forward(x: &[f64], a: f64) -> (Vec<f64>, Matrix) {
    let n = x.len();
    let mut v: Vec<f64> = x.iter().map(|t| t + a * t.sin()).collect();
    let mut d = Matrix::from_diagonal(&nalgebra::DVector::from_iterator(n, x.iter().map(|t| 1.0 + a * t.cos())));
    if n > 1 {
        for i in 0..n {
            let j = (i + 1) % n;
            let slope = a * v[j].cos();
            v[i] += a * v[j].sin();
            // row_i += slope * row_j
            let row_j = d.row(j).clone_owned();
            let mut row_i = d.row_mut(i);
            row_i += slope * row_j;
        }
    }
    (v, d)
}

/// Solves `x + a sin x = u` (Kepler's equation) for `|a| < 1`.
fn kepler_inverse(u: f64, a: f64) -> f64 {
    let (mut lo, mut hi) = (u - a.abs(), u + a.abs());
    let mut x = u;
    for _ in 0..100 {
        let f = x + a * x.sin() - u;
        if f == 0.0 {
            return x;
        }
        if f > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let step = f / (1.0 + a * x.cos());
        let mut next = x - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-16 * x.abs().max(1.0) {
            return next;
        }
        x = next;
    }
    x
}

/// Power-law stretch of the first axis, `x₁ ↦ x₁^γ`, with the remaining axes
/// fixed. On a polar chart `(r, θ)` this is the radial stretch `r ↦ r^γ`.
/// Requires `γ > 0` and a first axis inside `(0, ∞)`.
pub fn radial_power(source: ChartDomain, target: ChartDomain, gamma: f64) -> Result<Diffeomorphism> {
    if !(gamma > 0.0) {
        return Err(Error::Argument(format!("radial exponent must be positive, got {gamma}")));
    }
    if !(source.lower()[0] > 0.0) {
        return Err(Error::Argument("radial stretch needs a positive first axis".into()));
    }
    let n = source.dim();
    let forward: PointMap = Arc::new(move |x: &[f64]| {
        let mut y = x.to_vec();
        y[0] = x[0].powf(gamma);
        y
    });
    let inverse: PointMap = Arc::new(move |y: &[f64]| {
        let mut x = y.to_vec();
        x[0] = y[0].powf(1.0 / gamma);
        x
    });
    let jacobian: MatrixMap = Arc::new(move |x: &[f64]| {
        let mut d = Matrix::identity(n, n);
        d[(0, 0)] = gamma * x[0].powf(gamma - 1.0);
        d
    });
    let inverse_jacobian: MatrixMap = Arc::new(move |y: &[f64]| {
        let mut d = Matrix::identity(n, n);
        d[(0, 0)] = y[0].powf(1.0 / gamma - 1.0) / gamma;
        d
    });
    Ok(Diffeomorphism::new(source, target, forward, inverse)?
        .with_jacobian(jacobian)
        .with_inverse_jacobian(inverse_jacobian))
}

/// `x₁ ↦ ln x₁` with the remaining axes fixed. Between a polar chart and a
/// chart carrying the conformal metric `e^{2y₁} g` this is an isometry.
pub fn log_radial(source: ChartDomain, target: ChartDomain) -> Result<Diffeomorphism> {
    if !(source.lower()[0] > 0.0) {
        return Err(Error::Argument("log-radial map needs a positive first axis".into()));
    }
    let n = source.dim();
    let forward: PointMap = Arc::new(|x: &[f64]| {
        let mut y = x.to_vec();
        y[0] = x[0].ln();
        y
    });
    let inverse: PointMap = Arc::new(|y: &[f64]| {
        let mut x = y.to_vec();
        x[0] = y[0].exp();
        x
    });
    let jacobian: MatrixMap = Arc::new(move |x: &[f64]| {
        let mut d = Matrix::identity(n, n);
        d[(0, 0)] = 1.0 / x[0];
        d
    });
    let inverse_jacobian: MatrixMap = Arc::new(move |y: &[f64]| {
        let mut d = Matrix::identity(n, n);
        d[(0, 0)] = y[0].exp();
        d
    });
    Ok(Diffeomorphism::new(source, target, forward, inverse)?
        .with_jacobian(jacobian)
        .with_inverse_jacobian(inverse_jacobian))
}
