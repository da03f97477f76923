use std::fmt;

use rayon::prelude::*;

use super::factors::{BoundFactors, SpectralSamples};
use crate::diffeo::Diffeomorphism;
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::fields::{lp_from_node_values, pointwise_norms, pushforward, FormField};
use crate::geometry::{quadrature_nodes, sample_points, QuadratureRule};
use crate::multilinear::ComassOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Pushforward,
    Pullback,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Pushforward => "push",
            Direction::Pullback => "pull",
        })
    }
}

#[derive(Debug, Clone)]
pub struct CertifyOptions {
    /// Quadrature order `m`; the budget compares `m` with `2m`.
    pub order: usize,
    /// Halton points drawn on each chart for sup estimates.
    pub samples: usize,
    /// Floor on the relative tolerance.
    pub sup_tolerance: f64,
    pub comass: ComassOptions,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self { order: 16, samples: 4096, sup_tolerance: 1e-6, comass: ComassOptions::default() }
    }
}

/// A checked instance of `lower · ‖ω‖_p ≤ ‖T ω‖_p ≤ upper · ‖ω‖_p`, where
/// `T` is `φ∗` or `φ*` and `ω` is the given field.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCertificate {
    pub scenario: String,
    pub direction: Direction,
    pub k: usize,
    pub p: Exponent,
    /// `‖ω‖_p` at order `m`.
    pub norm_source: f64,
    /// `‖T ω‖_p` at order `m`.
    pub norm_transported: f64,
    /// The same norms at order `2m` (equal to the above for `p = ∞`).
    pub norm_source_refined: f64,
    pub norm_transported_refined: f64,
    pub factors: BoundFactors,
    pub r_low: f64,
    pub r_up: f64,
    pub quadrature_budget: f64,
    pub epsilon: f64,
    pub passed: bool,
}

impl BoundCertificate {
    /// Rebuilds the verdict from the recorded ratios and tolerance.
    pub fn verdict_from_ratios(r_low: f64, r_up: f64, epsilon: f64) -> bool {
        r_low >= 1.0 - epsilon && r_up <= 1.0 + epsilon
    }
}

/// Source sample points together with their images.
///
/// The source list holds Halton points, box corners and quadrature nodes of
/// the source chart, followed by preimages of the same kinds of points of the
/// target chart. Sup norms on both sides and the sup factors are all taken
/// over these paired lists.
#[derive(Debug, Clone)]
pub struct TransportedSamples {
    pub source: Vec<Vec<f64>>,
    pub target: Vec<Vec<f64>>,
}

impl TransportedSamples {
    pub fn new(
        phi: &Diffeomorphism,
        samples: usize,
        source_rule: Option<&QuadratureRule>,
        target_rule: Option<&QuadratureRule>,
    ) -> Self {
        let mut source = sample_points(phi.source(), samples, source_rule);
        let pulled: Vec<Vec<f64>> =
            sample_points(phi.target(), samples, target_rule).par_iter().map(|y| phi.inverse(y)).collect();
        source.extend(pulled);
        let target = source.par_iter().map(|x| phi.forward(x)).collect();
        Self { source, target }
    }
}

/// Everything about one (map, field, direction) that does not depend on `p`.
pub struct Certifier {
    scenario: String,
    direction: Direction,
    map: Diffeomorphism,
    field: FormField,
    options: CertifyOptions,
    source_rules: [QuadratureRule; 2],
    target_rules: [QuadratureRule; 2],
    source_nodes: [Vec<f64>; 2],
    target_nodes: [Vec<f64>; 2],
    sup_source: f64,
    sup_transported: f64,
    spectra: SpectralSamples,
}

impl Certifier {
    /// Precomputes pointwise norms and spectra.
    ///
    /// For [`Direction::Pushforward`] the field lives on the source chart of
    /// `phi`; for [`Direction::Pullback`] it lives on the target chart and
    /// its pullback is the pushforward by `φ⁻¹`, so the spectra used are
    /// those of `φ⁻¹`, i.e. the `βᵢ`.
    pub fn new(
        scenario: &str,
        phi: &Diffeomorphism,
        direction: Direction,
        field: &FormField,
        options: &CertifyOptions,
    ) -> Result<Self> {
        Self::build(scenario, phi, direction, field, options).map_err(|e| e.in_scenario(scenario))
    }

    fn build(
        scenario: &str,
        phi: &Diffeomorphism,
        direction: Direction,
        field: &FormField,
        options: &CertifyOptions,
    ) -> Result<Self> {
        if options.order < 1 {
            return Err(Error::Argument("quadrature order must be positive".into()));
        }
        let map = match direction {
            Direction::Pushforward => phi.clone(),
            Direction::Pullback => phi.inverse_map(),
        };
        if field.dim() != map.dim() {
            return Err(Error::Shape(format!("{}-dimensional field for a map of dimension {}", field.dim(), map.dim())));
        }
        let transported = pushforward(&map, field)?;
        let rules = |chart| -> Result<[QuadratureRule; 2]> {
            Ok([quadrature_nodes(chart, options.order)?, quadrature_nodes(chart, 2 * options.order)?])
        };
        let source_rules = rules(map.source())?;
        let target_rules = rules(map.target())?;
        let opts = &options.comass;
        let source_nodes = [
            pointwise_norms(field, &source_rules[0].nodes, opts)?,
            pointwise_norms(field, &source_rules[1].nodes, opts)?,
        ];
        let target_nodes = [
            pointwise_norms(&transported, &target_rules[0].nodes, opts)?,
            pointwise_norms(&transported, &target_rules[1].nodes, opts)?,
        ];
        let samples = TransportedSamples::new(&map, options.samples, Some(&source_rules[0]), Some(&target_rules[0]));
        let sup = |values: Vec<f64>| values.into_iter().fold(0.0, f64::max);
        let sup_source = sup(pointwise_norms(field, &samples.source, opts)?);
        let sup_transported = sup(pointwise_norms(&transported, &samples.target, opts)?);
        let spectra = SpectralSamples::forward(&map, &samples.source)?;
        Ok(Self {
            scenario: scenario.to_string(),
            direction,
            map,
            field: field.clone(),
            options: options.clone(),
            source_rules,
            target_rules,
            source_nodes,
            target_nodes,
            sup_source,
            sup_transported,
            spectra,
        })
    }

    pub fn spectra(&self) -> &SpectralSamples {
        &self.spectra
    }

    pub fn certify(&self, p: Exponent) -> Result<BoundCertificate> {
        self.certify_inner(p).map_err(|e| e.in_scenario(&self.scenario))
    }

    fn certify_inner(&self, p: Exponent) -> Result<BoundCertificate> {
        let k = self.field.degree();
        let factors = self.spectra.kform_factors(self.field.support(), k, p)?;
        let (src, tgt, src2, tgt2) = match p {
            Exponent::Infinite => (self.sup_source, self.sup_transported, self.sup_source, self.sup_transported),
            Exponent::Finite(_) => {
                let (s, t) = (self.map.source(), self.map.target());
                (
                    lp_from_node_values(s, &self.source_nodes[0], p, &self.source_rules[0])?,
                    lp_from_node_values(t, &self.target_nodes[0], p, &self.target_rules[0])?,
                    lp_from_node_values(s, &self.source_nodes[1], p, &self.source_rules[1])?,
                    lp_from_node_values(t, &self.target_nodes[1], p, &self.target_rules[1])?,
                )
            }
        };
        let rel = |a: f64, b: f64| if b == 0.0 { (a - b).abs() } else { ((a - b) / b).abs() };
        let quadrature_budget = rel(src, src2).max(rel(tgt, tgt2));
        let epsilon = self.options.sup_tolerance.max(quadrature_budget);
        let (r_low, r_up) = if src == 0.0 {
            let r = if tgt == 0.0 { 1.0 } else { f64::INFINITY };
            (r, r)
        } else {
            (tgt / (factors.lower * src), tgt / (factors.upper * src))
        };
        Ok(BoundCertificate {
            scenario: self.scenario.clone(),
            direction: self.direction,
            k,
            p,
            norm_source: src,
            norm_transported: tgt,
            norm_source_refined: src2,
            norm_transported_refined: tgt2,
            factors,
            r_low,
            r_up,
            quadrature_budget,
            epsilon,
            passed: BoundCertificate::verdict_from_ratios(r_low, r_up, epsilon),
        })
    }
}

/// Certifies one `(direction, k, p)` tuple for a field of degree `k`.
pub fn certify(
    scenario: &str,
    phi: &Diffeomorphism,
    direction: Direction,
    field: &FormField,
    p: Exponent,
    options: &CertifyOptions,
) -> Result<BoundCertificate> {
    Certifier::new(scenario, phi, direction, field, options)?.certify(p)
}
