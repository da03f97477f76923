use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{orthonormal_frame, volume_density, ChartDomain};
use crate::multilinear::{singular_values, Matrix};

pub type PointMap = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
pub type MatrixMap = Arc<dyn Fn(&[f64]) -> Matrix + Send + Sync>;

pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Smallest singular value accepted before a map is reported as degenerate.
pub const DEGENERACY_CUTOFF: f64 = 1e-12;

/// Descending singular values `α₁ ≥ … ≥ α_n > 0` of a map at `point`.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSpectrum {
    pub alphas: Vec<f64>,
    pub point: Vec<f64>,
}

impl SingularSpectrum {
    pub fn dim(&self) -> usize {
        self.alphas.len()
    }

    /// Product `α_{from+1} ⋯ α_{to}` (zero-based half-open range `from..to`).
    pub fn product(&self, from: usize, to: usize) -> f64 {
        self.alphas[from..to].iter().product()
    }

    /// Product of the `k` largest values.
    pub fn top(&self, k: usize) -> f64 {
        self.product(0, k)
    }

    /// Product of the `k` smallest values.
    pub fn bottom(&self, k: usize) -> f64 {
        let n = self.dim();
        self.product(n - k, n)
    }

    pub fn jacobian(&self) -> f64 {
        self.product(0, self.dim())
    }
}

/// An orientation-preserving diffeomorphism between two chart domains.
///
/// Both directions are supplied by the caller. Periodic coordinates of the
/// results are wrapped into the box of the receiving chart.
#[derive(Clone)]
pub struct Diffeomorphism {
    source: ChartDomain,
    target: ChartDomain,
    forward: PointMap,
    inverse: PointMap,
    jacobian: Option<MatrixMap>,
    inverse_jacobian: Option<MatrixMap>,
    fd_step: f64,
}

impl fmt::Debug for Diffeomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Diffeomorphism")
            .field("source", &self.source)
            .field("target", &self.target)
            .field("analytic_jacobian", &self.jacobian.is_some())
            .field("analytic_inverse_jacobian", &self.inverse_jacobian.is_some())
            .field("fd_step", &self.fd_step)
            .finish()
    }
}

impl Diffeomorphism {
    pub fn new(source: ChartDomain, target: ChartDomain, forward: PointMap, inverse: PointMap) -> Result<Self> {
        if source.dim() != target.dim() {
            return Err(Error::Shape(format!(
                "source has dimension {}, target {}",
                source.dim(),
                target.dim()
            )));
        }
        Ok(Self {
            source,
            target,
            forward,
            inverse,
            jacobian: None,
            inverse_jacobian: None,
            fd_step: DEFAULT_FD_STEP,
        })
    }

    pub fn with_jacobian(mut self, jacobian: MatrixMap) -> Self {
        self.jacobian = Some(jacobian);
        self
    }

    pub fn with_inverse_jacobian(mut self, jacobian: MatrixMap) -> Self {
        self.inverse_jacobian = Some(jacobian);
        self
    }

    pub fn with_fd_step(mut self, step: f64) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::Argument(format!("finite-difference step must be positive, got {step}")));
        }
        self.fd_step = step;
        Ok(self)
    }

    /// Drops any analytic Jacobians so that finite differences are used.
    pub fn without_analytic_jacobians(mut self) -> Self {
        self.jacobian = None;
        self.inverse_jacobian = None;
        self
    }

    pub fn source(&self) -> &ChartDomain {
        &self.source
    }

    pub fn target(&self) -> &ChartDomain {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.source.dim()
    }

    pub fn fd_step(&self) -> f64 {
        self.fd_step
    }

    pub fn has_analytic_jacobian(&self) -> bool {
        self.jacobian.is_some()
    }

    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        let mut y = (self.forward)(x);
        self.target.wrap(&mut y);
        y
    }

    pub fn inverse(&self, y: &[f64]) -> Vec<f64> {
        let mut x = (self.inverse)(y);
        self.source.wrap(&mut x);
        x
    }

    /// The inverse map as a diffeomorphism from the target chart to the source.
    pub fn inverse_map(&self) -> Diffeomorphism {
        let inverse_jacobian = match (&self.inverse_jacobian, &self.jacobian) {
            (Some(j), _) => Some(j.clone()),
            (None, Some(j)) => {
                let j = j.clone();
                let inv = self.inverse.clone();
                let source = self.source.clone();
                Some(Arc::new(move |y: &[f64]| {
                    let mut x = inv(y);
                    source.wrap(&mut x);
                    let m = j(&x);
                    let n = m.nrows();
                    m.try_inverse().unwrap_or_else(|| Matrix::from_element(n, n, f64::NAN))
                }) as MatrixMap)
            }
            (None, None) => None,
        };
        Diffeomorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
            jacobian: inverse_jacobian,
            inverse_jacobian: self.jacobian.clone(),
            fd_step: self.fd_step,
        }
    }

    /// Coordinate Jacobian `∂yᵃ/∂xᵇ` at `x`, analytic when available and
    /// central differences otherwise. Fails unless the determinant is positive.
    pub fn jacobian_matrix(&self, x: &[f64]) -> Result<Matrix> {
        self.check_point(x)?;
        let j = match &self.jacobian {
            Some(f) => f(x),
            None => self.finite_difference_jacobian(x),
        };
        if j.nrows() != self.dim() || j.ncols() != self.dim() {
            return Err(Error::Shape(format!("jacobian is {}x{} at {x:?}", j.nrows(), j.ncols())));
        }
        if let Some(bad) = j.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite { value: *bad, location: x.to_vec() });
        }
        let det = j.determinant();
        if !(det > 0.0) {
            return Err(Error::Orientation { point: x.to_vec(), det });
        }
        Ok(j)
    }

    pub fn finite_difference_jacobian(&self, x: &[f64]) -> Matrix {
        let n = self.dim();
        let h = self.fd_step;
        let mut j = Matrix::zeros(n, n);
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        for b in 0..n {
            xp[b] = x[b] + h;
            xm[b] = x[b] - h;
            let d = self.target.displacement(&(self.forward)(&xp), &(self.forward)(&xm));
            for a in 0..n {
                j[(a, b)] = d[a] / (2.0 * h);
            }
            xp[b] = x[b];
            xm[b] = x[b];
        }
        j
    }

    /// `Φ = E_N(φ(x))⁻¹ · Dφ(x) · E_M(x)`: the tangent map in orthonormal frames.
    pub fn frame_matrix(&self, x: &[f64]) -> Result<Matrix> {
        let dphi = self.jacobian_matrix(x)?;
        let e_m = orthonormal_frame(&self.source, x)?;
        let y = self.forward(x);
        let e_n = orthonormal_frame(&self.target, &y)?;
        frame_matrix_from(&dphi, &e_m, &e_n, &y)
    }

    pub fn singular_spectrum(&self, x: &[f64]) -> Result<SingularSpectrum> {
        let phi = self.frame_matrix(x)?;
        let alphas = singular_values(&phi)?;
        let alpha_min = *alphas.last().expect("dimension at least one");
        if alpha_min <= DEGENERACY_CUTOFF {
            return Err(Error::DegenerateMap { point: x.to_vec(), alpha_min });
        }
        Ok(SingularSpectrum { alphas, point: x.to_vec() })
    }

    /// `J(μ_M, μ_N)φ(x) = √det g_N(φ(x)) · det Dφ(x) / √det g_M(x)`.
    pub fn jacobian_determinant(&self, x: &[f64]) -> Result<f64> {
        let det = self.jacobian_matrix(x)?.determinant();
        let y = self.forward(x);
        Ok(volume_density(&self.target, &y)? * det / volume_density(&self.source, x)?)
    }

    /// Singular spectrum of `φ⁻¹` at the target point `y`.
    pub fn inverse_spectrum(&self, y: &[f64]) -> Result<SingularSpectrum> {
        self.inverse_map().singular_spectrum(y)
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::Shape(format!("point of length {} in a {}-chart", x.len(), self.dim())));
        }
        if let Some(bad) = x.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite { value: *bad, location: x.to_vec() });
        }
        Ok(())
    }

    /// Checks, on `samples` Halton points of each chart, that the map is
    /// orientation preserving, that both directions invert each other to
    /// `1e-8`, and that each direction lands in the opposite box.
    pub fn validate(&self, samples: usize) -> Result<()> {
        let slack = 1e-9;
        for x in self.source.halton_points(samples) {
            self.jacobian_matrix(&x)?;
            let y = self.forward(&x);
            if !self.target.contains(&y, slack) {
                return Err(Error::Argument(format!("forward image {y:?} of {x:?} leaves the target box")));
            }
            let back = self.inverse(&y);
            let gap = self.source.displacement(&back, &x);
            if gap.iter().any(|d| d.abs() > 1e-8) {
                return Err(Error::Argument(format!("inverse(forward({x:?})) = {back:?}")));
            }
        }
        for y in self.target.halton_points(samples) {
            let x = self.inverse(&y);
            if !self.source.contains(&x, slack) {
                return Err(Error::Argument(format!("inverse image {x:?} of {y:?} leaves the source box")));
            }
        }
        Ok(())
    }
}

pub(crate) fn frame_matrix_from(dphi: &Matrix, e_m: &Matrix, e_n: &Matrix, y: &[f64]) -> Result<Matrix> {
    let e_n_inv = e_n.clone().try_inverse().ok_or_else(|| Error::MetricDegenerate(y.to_vec()))?;
    Ok(e_n_inv * dphi * e_m)
}
