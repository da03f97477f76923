use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::multilinear::Matrix;

/// Metric field `x ↦ g(x)` in chart coordinates.
pub type MetricFn = Arc<dyn Fn(&[f64]) -> Matrix + Send + Sync>;

#[derive(Clone)]
pub enum Metric {
    Euclidean,
    Constant(Matrix),
    Field(MetricFn),
}

impl fmt::Debug for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::Euclidean => f.write_str("Euclidean"),
            Metric::Constant(g) => write!(f, "Constant({g:?})"),
            Metric::Field(_) => f.write_str("Field(..)"),
        }
    }
}

/// A single positively oriented coordinate chart: an axis-aligned box, some
/// of whose axes may be periodic, carrying a Riemannian metric.
#[derive(Debug, Clone)]
pub struct ChartDomain {
    lower: Vec<f64>,
    upper: Vec<f64>,
    periodic: Vec<bool>,
    metric: Metric,
}

impl ChartDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, periodic: Vec<bool>, metric: Metric) -> Result<Self> {
        let n = lower.len();
        if n == 0 {
            return Err(Error::Argument("chart needs at least one axis".into()));
        }
        if upper.len() != n || periodic.len() != n {
            return Err(Error::Shape("bounds and periodic flags must have equal length".into()));
        }
        if let Some(i) = (0..n).find(|&i| !(lower[i] < upper[i]) || !lower[i].is_finite() || !upper[i].is_finite()) {
            return Err(Error::Argument(format!(
                "axis {i}: lower bound {} must be below upper bound {}",
                lower[i], upper[i]
            )));
        }
        if let Metric::Constant(g) = &metric {
            if g.nrows() != n || g.ncols() != n {
                return Err(Error::Shape(format!("constant metric must be {n}x{n}")));
            }
        }
        Ok(Self { lower, upper, periodic, metric })
    }

    /// Euclidean box with no periodic axes.
    pub fn euclidean_box(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let n = lower.len();
        Self::new(lower, upper, vec![false; n], Metric::Euclidean)
    }

    pub fn with_metric(mut self, metric: Metric) -> Result<Self> {
        if let Metric::Constant(g) = &metric {
            if g.nrows() != self.dim() || g.ncols() != self.dim() {
                return Err(Error::Shape(format!("constant metric must be {0}x{0}", self.dim())));
            }
        }
        self.metric = metric;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn periodic(&self) -> &[bool] {
        &self.periodic
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn is_euclidean(&self) -> bool {
        matches!(self.metric, Metric::Euclidean)
    }

    /// Coordinate (Lebesgue) volume of the box.
    pub fn coordinate_volume(&self) -> f64 {
        self.lower.iter().zip(&self.upper).map(|(a, b)| b - a).product()
    }

    /// Maps periodic coordinates into `[lower, upper)`; other axes untouched.
    pub fn wrap(&self, x: &mut [f64]) {
        for i in 0..self.dim() {
            if self.periodic[i] {
                let period = self.upper[i] - self.lower[i];
                let mut t = (x[i] - self.lower[i]).rem_euclid(period);
                if t >= period {
                    t = 0.0;
                }
                x[i] = self.lower[i] + t;
            }
        }
    }

    /// Whether `x` lies in the box, allowing `slack` relative to each axis length.
    pub fn contains(&self, x: &[f64], slack: f64) -> bool {
        x.len() == self.dim()
            && (0..self.dim()).all(|i| {
                if self.periodic[i] {
                    return x[i].is_finite();
                }
                let tol = slack * (self.upper[i] - self.lower[i]);
                x[i] >= self.lower[i] - tol && x[i] <= self.upper[i] + tol
            })
    }

    /// Difference `a - b` with periodic axes reduced to the nearest image.
    pub fn displacement(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|i| {
                let d = a[i] - b[i];
                if self.periodic[i] {
                    let period = self.upper[i] - self.lower[i];
                    d - period * (d / period).round()
                } else {
                    d
                }
            })
            .collect()
    }

    /// Metric tensor at `x`, checked for finiteness and symmetry.
    pub fn metric_at(&self, x: &[f64]) -> Result<Matrix> {
        let n = self.dim();
        let g = match &self.metric {
            Metric::Euclidean => return Ok(Matrix::identity(n, n)),
            Metric::Constant(g) => g.clone(),
            Metric::Field(f) => f(x),
        };
        if g.nrows() != n || g.ncols() != n {
            return Err(Error::Shape(format!(
                "metric returned {}x{} at {x:?}, expected {n}x{n}",
                g.nrows(),
                g.ncols()
            )));
        }
        if g.iter().any(|v| !v.is_finite()) {
            return Err(Error::MetricDegenerate(x.to_vec()));
        }
        let scale = g.amax().max(f64::MIN_POSITIVE);
        for i in 0..n {
            for j in i + 1..n {
                if (g[(i, j)] - g[(j, i)]).abs() > 1e-12 * scale {
                    return Err(Error::MetricDegenerate(x.to_vec()));
                }
            }
        }
        Ok(g)
    }

    /// The first `count` points of the Halton sequence mapped into the box.
    pub fn halton_points(&self, count: usize) -> Vec<Vec<f64>> {
        const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];
        (1..=count as u64)
            .map(|index| {
                (0..self.dim())
                    .map(|axis| {
                        let h = radical_inverse(index, PRIMES[axis % PRIMES.len()]);
                        self.lower[axis] + h * (self.upper[axis] - self.lower[axis])
                    })
                    .collect()
            })
            .collect()
    }
}

fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut factor = inv;
    let mut value = 0.0;
    while index > 0 {
        value += (index % base) as f64 * factor;
        index /= base;
        factor *= inv;
    }
    value
}
