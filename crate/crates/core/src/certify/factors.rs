use rayon::prelude::*;

use crate::diffeo::Diffeomorphism;
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::fields::MaskFn;

/// The two factors of a two-sided norm inequality
/// `lower · ‖ω‖_p ≤ ‖φ∗ω‖_p ≤ upper · ‖ω‖_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundFactors {
    pub lower: f64,
    pub upper: f64,
    pub k: usize,
    pub p: Exponent,
    pub q: Exponent,
    pub masked: bool,
}

/// Log singular values and log Jacobians at a fixed list of points.
///
/// `points` are where support masks are evaluated; the spectra may belong to
/// a different point (see [`SpectralSamples::alphas_at_preimages`]).
#[derive(Debug, Clone)]
pub struct SpectralSamples {
    points: Vec<Vec<f64>>,
    log_alphas: Vec<Vec<f64>>,
    log_jacobians: Vec<f64>,
}

impl SpectralSamples {
    /// `αᵢ(x)` and `J(x)` of `phi` at source points.
    pub fn forward(phi: &Diffeomorphism, points: &[Vec<f64>]) -> Result<Self> {
        Self::build(points, |x| {
            let alphas = phi.singular_spectrum(x)?.alphas;
            Ok((alphas, phi.jacobian_determinant(x)?))
        })
    }

    /// `βᵢ(y)` and `J(φ⁻¹)(y)` at target points.
    pub fn inverse(phi: &Diffeomorphism, points: &[Vec<f64>]) -> Result<Self> {
        let inv = phi.inverse_map();
        Self::build(points, |y| {
            let betas = phi.inverse_spectrum(y)?.alphas;
            Ok((betas, inv.jacobian_determinant(y)?))
        })
    }

    /// `αᵢ(φ⁻¹(y))` and `J(φ⁻¹(y))`, indexed by the target points `y`.
    pub fn alphas_at_preimages(phi: &Diffeomorphism, points: &[Vec<f64>]) -> Result<Self> {
        Self::build(points, |y| {
            let x = phi.inverse(y);
            Ok((phi.singular_spectrum(&x)?.alphas, phi.jacobian_determinant(&x)?))
        })
    }

    fn build<F>(points: &[Vec<f64>], eval: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Result<(Vec<f64>, f64)> + Sync,
    {
        let rows: Vec<(Vec<f64>, f64)> = points
            .par_iter()
            .map(|x| {
                let (alphas, jac) = eval(x)?;
                if jac <= 0.0 || !jac.is_finite() {
                    return Err(Error::Orientation { point: x.clone(), det: jac });
                }
                Ok((alphas.iter().map(|a| a.ln()).collect(), jac.ln()))
            })
            .collect::<Result<_>>()?;
        let (log_alphas, log_jacobians) = rows.into_iter().unzip();
        Ok(Self { points: points.to_vec(), log_alphas, log_jacobians })
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.log_alphas.first().map_or(0, Vec::len)
    }

    /// `max` of `f` over the points inside the support.
    fn masked_max<F>(&self, support: Option<&MaskFn>, f: F) -> Result<f64>
    where
        F: Fn(usize) -> f64,
    {
        let mut best = f64::NEG_INFINITY;
        for (i, x) in self.points.iter().enumerate() {
            if support.is_none_or(|m| m(x)) {
                best = best.max(f(i));
            }
        }
        if best == f64::NEG_INFINITY {
            return Err(Error::EmptySupport);
        }
        Ok(best)
    }

    fn split_sums(&self, i: usize, at: usize) -> (f64, f64) {
        let row = &self.log_alphas[i];
        (row[..at].iter().sum(), row[at..].iter().sum())
    }

    fn check_degree(&self, k: usize) -> Result<()> {
        if k > self.dim() {
            return Err(Error::DegreeOutOfRange { n: self.dim(), k });
        }
        Ok(())
    }

    /// Factors for `k`-forms: the lower one is
    /// `‖1_S (α₁⋯α_k)^{1/q} (α_{k+1}⋯α_n)^{-1/p}‖_∞⁻¹` and the upper one is
    /// `‖1_S (α₁⋯α_{n-k})^{1/p} (α_{n-k+1}⋯α_n)^{-1/q}‖_∞`.
    pub fn kform_factors(&self, support: Option<&MaskFn>, k: usize, p: Exponent) -> Result<BoundFactors> {
        self.check_degree(k)?;
        let (ip, iq) = (p.reciprocal(), p.conjugate().reciprocal());
        let n = self.dim();
        let low = self.masked_max(support, |i| {
            let (top, rest) = self.split_sums(i, k);
            iq * top - ip * rest
        })?;
        let up = self.masked_max(support, |i| {
            let (top, rest) = self.split_sums(i, n - k);
            ip * top - iq * rest
        })?;
        Ok(self.factors(k, p, support, (-low).exp(), up.exp()))
    }

    /// Function factors `‖1_S J^{-1/p}‖_∞⁻¹` and `‖1_S J^{1/p}‖_∞`.
    pub fn scalar_factors(&self, support: Option<&MaskFn>, p: Exponent) -> Result<BoundFactors> {
        let ip = p.reciprocal();
        let low = self.masked_max(support, |i| -ip * self.log_jacobians[i])?;
        let up = self.masked_max(support, |i| ip * self.log_jacobians[i])?;
        Ok(self.factors(0, p, support, (-low).exp(), up.exp()))
    }

    /// Density factors `‖1_S J^{1/q}‖_∞⁻¹` and `‖1_S J^{-1/q}‖_∞`.
    pub fn density_factors(&self, support: Option<&MaskFn>, p: Exponent) -> Result<BoundFactors> {
        let iq = p.conjugate().reciprocal();
        let low = self.masked_max(support, |i| iq * self.log_jacobians[i])?;
        let up = self.masked_max(support, |i| -iq * self.log_jacobians[i])?;
        Ok(self.factors(self.dim(), p, support, (-low).exp(), up.exp()))
    }

    /// Pullback factors written with the forward singular values, for
    /// tables built by [`SpectralSamples::alphas_at_preimages`]:
    /// lower `‖(α₁⋯α_{n-k})^{1/p} (α_{n-k+1}⋯α_n)^{-1/q}‖_∞⁻¹`,
    /// upper `‖(α₁⋯α_k)^{1/q} (α_{k+1}⋯α_n)^{-1/p}‖_∞`.
    pub fn alpha_pullback_factors(&self, support: Option<&MaskFn>, k: usize, p: Exponent) -> Result<BoundFactors> {
        self.check_degree(k)?;
        let (ip, iq) = (p.reciprocal(), p.conjugate().reciprocal());
        let n = self.dim();
        let low = self.masked_max(support, |i| {
            let (top, rest) = self.split_sums(i, n - k);
            ip * top - iq * rest
        })?;
        let up = self.masked_max(support, |i| {
            let (top, rest) = self.split_sums(i, k);
            iq * top - ip * rest
        })?;
        Ok(self.factors(k, p, support, (-low).exp(), up.exp()))
    }

    fn factors(&self, k: usize, p: Exponent, support: Option<&MaskFn>, lower: f64, upper: f64) -> BoundFactors {
        BoundFactors { lower, upper, k, p, q: p.conjugate(), masked: support.is_some() }
    }
}

/// Pushforward factors for `k`-forms over masked source samples.
pub fn kform_factors(
    phi: &Diffeomorphism,
    support: Option<&MaskFn>,
    k: usize,
    p: Exponent,
    samples: &[Vec<f64>],
) -> Result<BoundFactors> {
    SpectralSamples::forward(phi, samples)?.kform_factors(support, k, p)
}

/// Pushforward factors for functions, from the Jacobian determinant.
pub fn scalar_factors(
    phi: &Diffeomorphism,
    support: Option<&MaskFn>,
    p: Exponent,
    samples: &[Vec<f64>],
) -> Result<BoundFactors> {
    SpectralSamples::forward(phi, samples)?.scalar_factors(support, p)
}

/// Pushforward factors for densities, from the Jacobian determinant.
pub fn density_factors(
    phi: &Diffeomorphism,
    support: Option<&MaskFn>,
    p: Exponent,
    samples: &[Vec<f64>],
) -> Result<BoundFactors> {
    SpectralSamples::forward(phi, samples)?.density_factors(support, p)
}

/// Pullback factors for `k`-forms from the singular values `βᵢ` of `φ⁻¹`
/// over masked target samples.
pub fn pullback_factors(
    phi: &Diffeomorphism,
    support: Option<&MaskFn>,
    k: usize,
    p: Exponent,
    target_samples: &[Vec<f64>],
) -> Result<BoundFactors> {
    SpectralSamples::inverse(phi, target_samples)?.kform_factors(support, k, p)
}

/// The same factors as [`pullback_factors`], evaluated through
/// `βᵢ = α_{n-i+1}⁻¹ ∘ φ⁻¹`.
pub fn pullback_factors_from_alphas(
    phi: &Diffeomorphism,
    support: Option<&MaskFn>,
    k: usize,
    p: Exponent,
    target_samples: &[Vec<f64>],
) -> Result<BoundFactors> {
    SpectralSamples::alphas_at_preimages(phi, target_samples)?.alpha_pullback_factors(support, k, p)
}
