use std::f64::consts::PI;

use approx::assert_relative_eq;
use formbound::certify::{certify, CertifyOptions, Direction};
use formbound::diffeo::builtin;
use formbound::fields::{lp_norm, pushforward, FormField};
use formbound::geometry::{integrate, metrics, quadrature_nodes, ChartDomain, Metric};
use formbound::{Error, Exponent, Matrix};

fn quick() -> CertifyOptions {
    CertifyOptions { order: 12, samples: 512, ..CertifyOptions::default() }
}

fn torus(n: usize, metric: Metric) -> ChartDomain {
    ChartDomain::new(vec![0.0; n], vec![2.0 * PI; n], vec![true; n], metric).unwrap()
}

#[test]
fn gauss_legendre_integrates_polynomials_on_a_box() {
    let c = ChartDomain::euclidean_box(vec![0.0, -1.0], vec![2.0, 1.0]).unwrap();
    let rule = quadrature_nodes(&c, 6).unwrap();
    let v = integrate(&c, |x| x[0].powi(5) * x[1].powi(2), &rule).unwrap();
    assert_relative_eq!(v, 64.0 / 6.0 * 2.0 / 3.0, max_relative = 1e-13);
}

#[test]
fn polar_area_of_annulus() {
    let c = ChartDomain::new(vec![1.0, 0.0], vec![2.0, 2.0 * PI], vec![false, true], metrics::polar(2).unwrap()).unwrap();
    let rule = quadrature_nodes(&c, 8).unwrap();
    let one = FormField::constant(c, 0, vec![1.0]).unwrap();
    let area = lp_norm(&one, Exponent::Finite(1.0), &rule).unwrap();
    assert_relative_eq!(area, 3.0 * PI, max_relative = 1e-12);
}

#[test]
fn linear_stretch_certificates_in_both_directions() {
    let src = ChartDomain::euclidean_box(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
    let dst = ChartDomain::euclidean_box(vec![0.0, 0.0], vec![3.0, 1.0]).unwrap();
    let a = Matrix::from_row_slice(2, 2, &[3.0, 0.0, 0.0, 1.0]);
    let phi = builtin::linear(src.clone(), dst.clone(), a, vec![0.0, 0.0]).unwrap();
    for k in 0..=2 {
        let omega = FormField::constant(src.clone(), k, vec![1.0; [1, 2, 1][k]]).unwrap();
        let eta = FormField::constant(dst.clone(), k, vec![1.0; [1, 2, 1][k]]).unwrap();
        for p in [1.0, 2.0, f64::INFINITY] {
            let p = Exponent::new(p).unwrap();
            let push = certify("stretch", &phi, Direction::Pushforward, &omega, p, &quick()).unwrap();
            let pull = certify("stretch", &phi, Direction::Pullback, &eta, p, &quick()).unwrap();
            assert!(push.passed && pull.passed, "k={k} p={p}");
            assert!(push.factors.lower <= push.factors.upper);
        }
    }
}

#[test]
fn pushforward_of_scalar_is_composition_with_inverse() {
    let c = torus(2, Metric::Euclidean);
    let phi = builtin::sinusoidal(c.clone(), c.clone(), 0.2).unwrap();
    let u = FormField::new(c, 0, |x| vec![x[0].sin() + 2.0 * x[1].cos()]).unwrap();
    let pushed = pushforward(&phi, &u).unwrap();
    for y in [[0.3, 1.2], [4.0, 5.5], [6.0, 0.1]] {
        let x = phi.inverse(&y);
        let expected = x[0].sin() + 2.0 * x[1].cos();
        assert_relative_eq!(pushed.coeffs_at(&y).unwrap()[0], expected, max_relative = 1e-10);
    }
}

#[test]
fn three_dimensional_torus_certificates() {
    let phi = builtin::sinusoidal(torus(3, Metric::Euclidean), torus(3, Metric::Euclidean), 0.2).unwrap();
    for k in 0..=3 {
        let r = [1, 3, 3, 1][k];
        let omega = FormField::new(phi.source().clone(), k, move |x| (0..r).map(|i| 1.5 + (x[i % 3]).cos()).collect()).unwrap();
        let cert = certify("torus3", &phi, Direction::Pushforward, &omega, Exponent::Finite(2.0), &quick()).unwrap();
        assert!(cert.passed, "k={k}: r_low={} r_up={}", cert.r_low, cert.r_up);
    }
}

#[test]
fn malformed_forms_are_rejected() {
    let c = ChartDomain::euclidean_box(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
    assert!(matches!(FormField::new(c.clone(), 3, |_| vec![1.0]), Err(Error::DegreeOutOfRange { .. })));
    assert!(matches!(FormField::constant(c, 1, vec![1.0]), Err(Error::Shape(_))));
}
