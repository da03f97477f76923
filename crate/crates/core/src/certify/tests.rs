use std::f64::consts::PI;
use std::sync::Arc;

use approx::assert_relative_eq;

use super::*;
use crate::diffeo::{builtin, Diffeomorphism};
use crate::error::Error;
use crate::fields::{FormField, MaskFn};
use crate::geometry::{metrics, volume_density, ChartDomain, Metric};
use crate::multilinear::{binomial, Matrix};

const EXPONENTS: [f64; 5] = [1.0, 1.5, 2.0, 3.0, f64::INFINITY];

fn exponents() -> impl Iterator<Item = Exponent> {
    EXPONENTS.iter().map(|&p| Exponent::new(p).unwrap())
}

fn square(upper: [f64; 2]) -> ChartDomain {
    ChartDomain::euclidean_box(vec![0.0, 0.0], upper.to_vec()).unwrap()
}

fn torus(n: usize, metric: Metric) -> ChartDomain {
    ChartDomain::new(vec![0.0; n], vec![2.0 * PI; n], vec![true; n], metric).unwrap()
}

fn stretch_x() -> Diffeomorphism {
    let a = Matrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]);
    builtin::linear(square([1.0, 1.0]), square([2.0, 1.0]), a, vec![0.0, 0.0]).unwrap()
}

fn rotation() -> Diffeomorphism {
    let c = ChartDomain::euclidean_box(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap();
    builtin::rotation(c.clone(), c, PI / 2.0, vec![0.0, 0.0]).unwrap()
}

fn shear_cylinder() -> Diffeomorphism {
    let c = ChartDomain::new(vec![0.0, 0.0], vec![1.0, 1.0], vec![true, false], Metric::Euclidean).unwrap();
    builtin::shear(c.clone(), c, 1.0).unwrap()
}

fn wavy_sinusoidal(n: usize) -> Diffeomorphism {
    let target = torus(n, metrics::diagonal(&[1.5, 0.8, 1.2][..n]).unwrap());
    builtin::sinusoidal(torus(n, metrics::wavy(n).unwrap()), target, 0.3).unwrap()
}

fn wobbly(chart: ChartDomain, k: usize) -> FormField {
    let r = binomial(chart.dim(), k);
    FormField::new(chart, k, move |x| {
        (0..r)
            .map(|i| {
                let s: f64 = x.iter().enumerate().map(|(j, v)| (v + 0.3 * (i + j) as f64).sin()).sum();
                2.0 + 0.5 * s / x.len() as f64 + 0.1 * i as f64
            })
            .collect()
    })
    .unwrap()
}

fn cobasis(chart: ChartDomain, k: usize, index: usize) -> FormField {
    let mut c = vec![0.0; binomial(chart.dim(), k)];
    c[index] = 1.0;
    FormField::constant(chart, k, c).unwrap()
}

fn small_options() -> CertifyOptions {
    CertifyOptions { order: 10, samples: 256, ..CertifyOptions::default() }
}

#[test]
fn isometry_factors_are_one() {
    let phi = rotation();
    let pts = phi.source().halton_points(300);
    for k in 0..=2 {
        for p in exponents() {
            let f = kform_factors(&phi, None, k, p, &pts).unwrap();
            assert_relative_eq!(f.lower, 1.0, max_relative = 1e-12);
            assert_relative_eq!(f.upper, 1.0, max_relative = 1e-12);
        }
    }
}

#[test]
fn kform_factors_specialise_to_scalar_and_density() {
    for n in [2, 3] {
        let phi = wavy_sinusoidal(n);
        let pts = phi.source().halton_points(500);
        let table = SpectralSamples::forward(&phi, &pts).unwrap();
        for p in exponents() {
            let (k0, s) = (table.kform_factors(None, 0, p).unwrap(), table.scalar_factors(None, p).unwrap());
            assert_relative_eq!(k0.lower, s.lower, max_relative = 1e-12);
            assert_relative_eq!(k0.upper, s.upper, max_relative = 1e-12);
            let (kn, d) = (table.kform_factors(None, n, p).unwrap(), table.density_factors(None, p).unwrap());
            assert_relative_eq!(kn.lower, d.lower, max_relative = 1e-12);
            assert_relative_eq!(kn.upper, d.upper, max_relative = 1e-12);
        }
    }
}

#[test]
fn scalar_factor_examples() {
    let pts = square([1.0, 1.0]).halton_points(100);
    for p in exponents() {
        let f = scalar_factors(&shear_cylinder(), None, p, &pts).unwrap();
        assert_relative_eq!(f.lower, 1.0, max_relative = 1e-12);
        assert_relative_eq!(f.upper, 1.0, max_relative = 1e-12);
    }
    let torus_pts = torus(2, Metric::Euclidean).halton_points(100);
    let f = scalar_factors(&wavy_sinusoidal(2), None, Exponent::Infinite, &torus_pts).unwrap();
    assert_eq!((f.lower, f.upper), (1.0, 1.0));
    // J ≡ 2: ‖u∘φ⁻¹‖₁ = 2‖u‖₁ exactly
    let f = scalar_factors(&stretch_x(), None, Exponent::Finite(1.0), &pts).unwrap();
    assert_relative_eq!(f.lower, 2.0, max_relative = 1e-12);
    assert_relative_eq!(f.upper, 2.0, max_relative = 1e-12);
}

#[test]
fn density_factor_examples() {
    let pts = square([1.0, 1.0]).halton_points(100);
    let torus_pts = torus(2, Metric::Euclidean).halton_points(100);
    let f = density_factors(&wavy_sinusoidal(2), None, Exponent::Finite(1.0), &torus_pts).unwrap();
    assert_eq!((f.lower, f.upper), (1.0, 1.0));
    let f = density_factors(&stretch_x(), None, Exponent::Infinite, &pts).unwrap();
    assert_relative_eq!(f.lower, 0.5, max_relative = 1e-12);
    assert_relative_eq!(f.upper, 0.5, max_relative = 1e-12);
    for p in exponents() {
        let f = density_factors(&shear_cylinder(), None, p, &pts).unwrap();
        assert_relative_eq!(f.lower, 1.0, max_relative = 1e-12);
        assert_relative_eq!(f.upper, 1.0, max_relative = 1e-12);
    }
}

#[test]
fn conjugates_are_recorded() {
    let pts = square([1.0, 1.0]).halton_points(10);
    let f = kform_factors(&stretch_x(), None, 1, Exponent::Finite(3.0), &pts).unwrap();
    assert_eq!(f.q, Exponent::Finite(1.5));
    assert!(!f.masked);
    assert_eq!(conjugate_exponent(1.0).unwrap(), f64::INFINITY);
}

#[test]
fn pullback_scalar_factors_for_stretch() {
    let pts = square([2.0, 1.0]).halton_points(100);
    let f = pullback_factors(&stretch_x(), None, 0, Exponent::Finite(1.0), &pts).unwrap();
    assert_relative_eq!(f.lower, 0.5, max_relative = 1e-12);
    assert_relative_eq!(f.upper, 0.5, max_relative = 1e-12);
    for p in exponents() {
        assert_eq!(pullback_factors(&rotation(), None, 1, p, &rotation().target().halton_points(50)).unwrap().lower, 1.0);
    }
}

#[test]
fn pullback_routes_agree() {
    for n in [2, 3] {
        let phi = wavy_sinusoidal(n);
        let pts = phi.target().halton_points(400);
        for k in 0..=n {
            for p in exponents() {
                let beta = pullback_factors(&phi, None, k, p, &pts).unwrap();
                let alpha = pullback_factors_from_alphas(&phi, None, k, p, &pts).unwrap();
                assert_relative_eq!(beta.lower, alpha.lower, max_relative = 1e-10);
                assert_relative_eq!(beta.upper, alpha.upper, max_relative = 1e-10);
            }
        }
    }
}

#[test]
fn pullback_factors_match_inverse_pushforward_factors() {
    let phi = wavy_sinusoidal(2);
    let pts = phi.target().halton_points(200);
    let inv = phi.inverse_map();
    for k in 0..=2 {
        for p in exponents() {
            let a = pullback_factors(&phi, None, k, p, &pts).unwrap();
            let b = kform_factors(&inv, None, k, p, &pts).unwrap();
            assert_eq!((a.lower, a.upper), (b.lower, b.upper));
        }
    }
}

#[test]
fn enlarging_the_mask_widens_the_factors() {
    let phi = wavy_sinusoidal(2);
    let pts = phi.source().halton_points(500);
    let table = SpectralSamples::forward(&phi, &pts).unwrap();
    let small: MaskFn = Arc::new(|x: &[f64]| x[0] < 1.0 && x[1] < 2.0);
    let medium: MaskFn = Arc::new(|x: &[f64]| x[0] < 3.0);
    for k in 0..=2 {
        for p in exponents() {
            let s = table.kform_factors(Some(&small), k, p).unwrap();
            let m = table.kform_factors(Some(&medium), k, p).unwrap();
            let full = table.kform_factors(None, k, p).unwrap();
            assert!(s.masked && !full.masked);
            assert!(s.upper <= m.upper && m.upper <= full.upper);
            assert!(s.lower >= m.lower && m.lower >= full.lower);
        }
    }
}

#[test]
fn empty_support_is_an_error() {
    let pts = square([1.0, 1.0]).halton_points(50);
    let none: MaskFn = Arc::new(|_: &[f64]| false);
    let r = kform_factors(&stretch_x(), Some(&none), 1, Exponent::Finite(2.0), &pts);
    assert_eq!(r.unwrap_err(), Error::EmptySupport);
}

#[test]
fn isometry_certificates_are_equalities() {
    let phi = rotation();
    for direction in [Direction::Pushforward, Direction::Pullback] {
        for k in 0..=2 {
            let field = wobbly(phi.source().clone(), k);
            let certifier = Certifier::new("rotation", &phi, direction, &field, &small_options()).unwrap();
            for p in exponents() {
                let c = certifier.certify(p).unwrap();
                assert!(c.passed, "{c:?}");
                assert!((c.r_low - 1.0).abs() <= c.epsilon && (c.r_up - 1.0).abs() <= c.epsilon, "{c:?}");
            }
        }
    }
}

#[test]
fn stretch_sup_lower_bound_is_tight() {
    let phi = stretch_x();
    let dx1 = cobasis(phi.source().clone(), 1, 0);
    let c = certify("stretch", &phi, Direction::Pushforward, &dx1, Exponent::Infinite, &small_options()).unwrap();
    assert_relative_eq!(c.norm_transported, 0.5, max_relative = 1e-14);
    assert_relative_eq!(c.factors.lower, 0.5, max_relative = 1e-12);
    assert_relative_eq!(c.r_low, 1.0, max_relative = 1e-12);
    assert!(c.passed);
}

#[test]
fn shear_does_not_preserve_one_form_norms() {
    let phi = shear_cylinder();
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let field = wobbly(phi.source().clone(), 1);
    let c = certify("shear", &phi, Direction::Pushforward, &field, Exponent::Finite(2.0), &small_options()).unwrap();
    assert!(c.passed, "{c:?}");
    assert!(c.r_up < 1.0);
    assert_relative_eq!(c.factors.upper, golden, max_relative = 1e-9);
}

#[test]
fn constant_linear_certificates_are_tight_on_one_side() {
    let phi = stretch_x();
    for direction in [Direction::Pushforward, Direction::Pullback] {
        let chart = match direction {
            Direction::Pushforward => phi.source().clone(),
            Direction::Pullback => phi.target().clone(),
        };
        for k in 0..=2 {
            for index in 0..binomial(2, k) {
                let field = cobasis(chart.clone(), k, index);
                let certifier = Certifier::new("stretch", &phi, direction, &field, &small_options()).unwrap();
                for p in exponents() {
                    let c = certifier.certify(p).unwrap();
                    assert!(c.passed, "{c:?}");
                    let gap = (c.r_low - 1.0).abs().min((c.r_up - 1.0).abs());
                    assert!(gap < 1e-9, "{c:?}");
                }
            }
        }
    }
}

#[test]
fn density_mass_is_conserved() {
    let phi = wavy_sinusoidal(2);
    let chart = phi.source().clone();
    let density_chart = chart.clone();
    let density = FormField::new(chart, 2, move |x| {
        vec![(1.5 + x[0].sin() * x[1].cos()) * volume_density(&density_chart, x).unwrap()]
    })
    .unwrap();
    let c = certify("mass", &phi, Direction::Pushforward, &density, Exponent::Finite(1.0), &CertifyOptions::default())
        .unwrap();
    assert_eq!((c.factors.lower, c.factors.upper), (1.0, 1.0));
    assert!(c.passed, "{c:?}");
    assert!((c.norm_transported - c.norm_source).abs() / c.norm_source <= c.epsilon);
}

#[test]
fn nonlinear_certificates_pass_in_both_directions() {
    let phi = wavy_sinusoidal(2);
    for direction in [Direction::Pushforward, Direction::Pullback] {
        let chart = match direction {
            Direction::Pushforward => phi.source().clone(),
            Direction::Pullback => phi.target().clone(),
        };
        for k in 0..=2 {
            let certifier =
                Certifier::new("wavy", &phi, direction, &wobbly(chart.clone(), k), &CertifyOptions::default()).unwrap();
            for p in exponents() {
                let c = certifier.certify(p).unwrap();
                assert!(c.passed, "{c:?}");
                assert!(c.quadrature_budget < 1e-6, "{c:?}");
                assert_eq!(c.passed, BoundCertificate::verdict_from_ratios(c.r_low, c.r_up, c.epsilon));
            }
        }
    }
}

#[test]
fn errors_carry_the_scenario_id() {
    let a = Matrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1e-13]);
    let phi = builtin::linear(square([1.0, 1.0]), square([1.0, 1e-13]), a, vec![0.0, 0.0]).unwrap();
    let field = wobbly(phi.source().clone(), 1);
    let err = certify("flat", &phi, Direction::Pushforward, &field, Exponent::Finite(2.0), &small_options())
        .unwrap_err();
    match err {
        Error::Scenario { id, source } => {
            assert_eq!(id, "flat");
            assert!(matches!(*source, Error::DegenerateMap { .. }), "{source:?}");
        }
        other => panic!("unexpected {other:?}"),
    }
}
