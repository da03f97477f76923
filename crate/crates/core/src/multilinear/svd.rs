use super::Matrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// Singular values in descending order, via one-sided (Hestenes) Jacobi.
///
/// Column rotations are applied until every pair of columns is orthogonal to
/// working precision; the singular values are then the column norms. This
/// keeps small singular values accurate relative to their own size, which the
/// compound-matrix checks rely on.
pub fn singular_values(m: &Matrix) -> Result<Vec<f64>> {
    if let Some(bad) = m.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite { value: *bad, location: vec![] });
    }
    // Work with at least as many rows as columns.
    let mut a = if m.nrows() >= m.ncols() { m.clone() } else { m.transpose() };
    let cols = a.ncols();
    if cols == 0 {
        return Ok(vec![]);
    }

    // Scale to keep squared norms away from overflow and underflow.
    let scale = a.amax();
    if scale == 0.0 {
        return Ok(vec![0.0; cols]);
    }
    a /= scale;

    let tol = f64::EPSILON * (a.nrows() as f64).sqrt();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..a.nrows() {
                    let (x, y) = (a[(i, p)], a[(i, q)]);
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if gamma == 0.0 || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..a.nrows() {
                    let (x, y) = (a[(i, p)], a[(i, q)]);
                    a[(i, p)] = c * x - s * y;
                    a[(i, q)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut values: Vec<f64> = (0..cols).map(|j| (a.column(j).norm() * scale).max(0.0)).collect();
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Eigenvalues of a symmetric 3×3 matrix from its characteristic cubic,
    /// solved with the trigonometric formula for three real roots.
    fn symmetric_cubic_eigenvalues(s: &Matrix) -> [f64; 3] {
        let tr = s.trace();
        let c2 = s[(0, 0)] * s[(1, 1)] + s[(0, 0)] * s[(2, 2)] + s[(1, 1)] * s[(2, 2)]
            - s[(0, 1)] * s[(1, 0)]
            - s[(0, 2)] * s[(2, 0)]
            - s[(1, 2)] * s[(2, 1)];
        let det = s[(0, 0)] * (s[(1, 1)] * s[(2, 2)] - s[(1, 2)] * s[(2, 1)])
            - s[(0, 1)] * (s[(1, 0)] * s[(2, 2)] - s[(1, 2)] * s[(2, 0)])
            + s[(0, 2)] * (s[(1, 0)] * s[(2, 1)] - s[(1, 1)] * s[(2, 0)]);
        // λ³ − tr λ² + c2 λ − det = 0; substitute λ = t + tr/3.
        let shift = tr / 3.0;
        let p = c2 - tr * tr / 3.0;
        let q = -2.0 * tr.powi(3) / 27.0 + tr * c2 / 3.0 - det;
        let r = (-p / 3.0).sqrt();
        let arg = ((-q / 2.0) / r.powi(3)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        let mut roots = [0.0; 3];
        for (j, root) in roots.iter_mut().enumerate() {
            let t = 2.0 * r * (theta - 2.0 * std::f64::consts::PI * j as f64 / 3.0).cos();
            // one Newton polish on the original cubic
            let mut l = t + shift;
            let f = l.powi(3) - tr * l * l + c2 * l - det;
            let df = 3.0 * l * l - 2.0 * tr * l + c2;
            if df.abs() > 1e-300 {
                l -= f / df;
            }
            *root = l;
        }
        roots.sort_by(|a, b| b.total_cmp(a));
        roots
    }

    #[test]
    fn diagonal_with_negative_entry() {
        let m = Matrix::from_row_slice(2, 2, &[3.0, 0.0, 0.0, -2.0]);
        assert_eq!(singular_values(&m).unwrap(), vec![3.0, 2.0]);
    }

    #[test]
    fn rotations_have_unit_singular_values() {
        for theta in [0.1, 1.0, 2.5, -3.0] {
            let (s, c) = f64::sin_cos(theta);
            let r = Matrix::from_row_slice(2, 2, &[c, -s, s, c]);
            for v in singular_values(&r).unwrap() {
                assert_relative_eq!(v, 1.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn matches_cubic_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let m = Matrix::from_fn(3, 3, |_, _| rng.random_range(-2.0..2.0));
            let eig = symmetric_cubic_eigenvalues(&(m.transpose() * &m));
            let sv = singular_values(&m).unwrap();
            for (s, l) in sv.iter().zip(eig) {
                assert!((s - l.max(0.0).sqrt()).abs() < 1e-8, "{s} vs {}", l.sqrt());
            }
        }
    }

    #[test]
    fn orthogonal_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let m = Matrix::from_fn(5, 5, |_, _| rng.random_range(-1.0..1.0));
        let q = Matrix::from_fn(5, 5, |_, _| rng.random_range(-1.0..1.0)).qr().q();
        let a = singular_values(&m).unwrap();
        let b = singular_values(&(&q * &m * q.transpose())).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_relative_eq!(x, y, max_relative = 1e-12);
        }
    }

    #[test]
    fn rectangular_and_rank_deficient() {
        let m = Matrix::from_row_slice(2, 3, &[1.0, 0.0, 0.0, 0.0, 2.0, 0.0]);
        assert_eq!(singular_values(&m).unwrap(), vec![2.0, 1.0]);
        let z = Matrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let sv = singular_values(&z).unwrap();
        assert_relative_eq!(sv[0], 2.0, epsilon = 1e-15);
        assert!(sv[1].abs() < 1e-15);
    }

    #[test]
    fn large_dense_matches_nalgebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let m = Matrix::from_fn(70, 70, |_, _| rng.random_range(-1.0..1.0));
        let ours = singular_values(&m).unwrap();
        let mut reference: Vec<f64> = m.singular_values().iter().copied().collect();
        reference.sort_by(|a, b| b.total_cmp(a));
        for (x, y) in ours.iter().zip(&reference) {
            assert!((x - y).abs() < 1e-10 * reference[0]);
        }
    }

    #[test]
    fn non_finite_rejected() {
        let m = Matrix::from_row_slice(1, 2, &[1.0, f64::NAN]);
        assert!(matches!(singular_values(&m), Err(Error::NonFinite { .. })));
    }
}
