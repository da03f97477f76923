use std::fmt;
use std::sync::Arc;

use crate::diffeo::Diffeomorphism;
use crate::error::{Error, Result};
use crate::geometry::ChartDomain;
use crate::multilinear::{binomial, AlternatingTensor, MultiIndexTable};

pub type CoeffFn = Arc<dyn Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync>;
pub type MaskFn = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// A `k`-form on a chart, given by its components `ω_I(x)` in the coordinate
/// cobasis `dx^I` (lexicographic `I`), with an optional support indicator.
#[derive(Clone)]
pub struct FormField {
    chart: ChartDomain,
    k: usize,
    coeffs: CoeffFn,
    support: Option<MaskFn>,
}

impl fmt::Debug for FormField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FormField")
            .field("chart", &self.chart)
            .field("k", &self.k)
            .field("masked", &self.support.is_some())
            .finish()
    }
}

impl FormField {
    pub fn new<F>(chart: ChartDomain, k: usize, coeffs: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        Self::from_fallible(chart, k, Arc::new(move |x: &[f64]| Ok(coeffs(x))))
    }

    pub fn from_fallible(chart: ChartDomain, k: usize, coeffs: CoeffFn) -> Result<Self> {
        if k > chart.dim() {
            return Err(Error::DegreeOutOfRange { n: chart.dim(), k });
        }
        Ok(Self { chart, k, coeffs, support: None })
    }

    /// Form with the same coefficients at every point.
    pub fn constant(chart: ChartDomain, k: usize, coeffs: Vec<f64>) -> Result<Self> {
        let expected = binomial(chart.dim(), k);
        if coeffs.len() != expected {
            return Err(Error::Shape(format!("{k}-form needs {expected} coefficients, got {}", coeffs.len())));
        }
        Self::new(chart, k, move |_| coeffs.clone())
    }

    pub fn with_support(mut self, mask: MaskFn) -> Self {
        self.support = Some(mask);
        self
    }

    pub fn chart(&self) -> &ChartDomain {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn support(&self) -> Option<&MaskFn> {
        self.support.as_ref()
    }

    pub fn in_support(&self, x: &[f64]) -> bool {
        self.support.as_ref().is_none_or(|m| m(x))
    }

    /// Coordinate components at `x`, checked for length and finiteness.
    pub fn coeffs_at(&self, x: &[f64]) -> Result<Vec<f64>> {
        let c = (self.coeffs)(x)?;
        let expected = binomial(self.dim(), self.k);
        if c.len() != expected {
            return Err(Error::Shape(format!(
                "{}-form returned {} coefficients at {x:?}, expected {expected}",
                self.k,
                c.len()
            )));
        }
        if let Some(bad) = c.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite { value: *bad, location: x.to_vec() });
        }
        Ok(c)
    }

    pub fn tensor_at(&self, x: &[f64]) -> Result<AlternatingTensor> {
        AlternatingTensor::new(self.dim(), self.k, self.coeffs_at(x)?)
    }
}

/// `(φ*η)(x) = C_k(Dφ(x))ᵀ · η(φ(x))`, a form on the source chart.
pub fn pullback(phi: &Diffeomorphism, eta: &FormField) -> Result<FormField> {
    if eta.dim() != phi.dim() {
        return Err(Error::Shape(format!(
            "{}-dimensional form pulled back by a map of dimension {}",
            eta.dim(),
            phi.dim()
        )));
    }
    let k = eta.degree();
    let table = Arc::new(MultiIndexTable::new(phi.dim(), k)?);
    let map = phi.clone();
    let field = eta.clone();
    let coeffs: CoeffFn = Arc::new(move |x: &[f64]| {
        let y = map.forward(x);
        let eta_y = field.coeffs_at(&y)?;
        if k == 0 {
            return Ok(eta_y);
        }
        let d = map.jacobian_matrix(x)?;
        let c = crate::multilinear::compound::compound_with_table(&d, &table);
        Ok((0..table.rank()).map(|i| (0..table.rank()).map(|j| c[(j, i)] * eta_y[j]).sum()).collect())
    });
    let mut out = FormField::from_fallible(phi.source().clone(), k, coeffs)?;
    if let Some(mask) = eta.support() {
        let mask = mask.clone();
        let map = phi.clone();
        out = out.with_support(Arc::new(move |x: &[f64]| mask(&map.forward(x))));
    }
    Ok(out)
}

/// `φ∗ω = (φ⁻¹)*ω`, a form on the target chart.
pub fn pushforward(phi: &Diffeomorphism, omega: &FormField) -> Result<FormField> {
    pullback(&phi.inverse_map(), omega)
}
