use nalgebra::SymmetricEigen;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::map::Diffeomorphism;
use crate::error::{Error, Result};
use crate::multilinear::Matrix;

/// Angles swept for two-dimensional maps.
pub const SWEEP_ANGLES: usize = 10_000;
/// Random subspaces drawn for three-dimensional maps.
pub const SUBSPACE_SAMPLES: usize = 2_000;

/// Two-sided estimate of `α_i` from the variational characterisations:
/// `maximin ≤ α_i ≤ minimax`. For `n = 2` both sides are the same sweep value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularBracket {
    pub maximin: f64,
    pub minimax: f64,
}

impl SingularBracket {
    pub fn value(&self) -> f64 {
        0.5 * (self.maximin + self.minimax)
    }
}

/// Stretch factors `|Dφ X|_{g_N} / |X|_{g_M}` computed straight from the
/// coordinate Jacobian and both metrics, without orthonormal frames.
struct Stretch {
    pushed: Matrix,
    source: Matrix,
}

impl Stretch {
    fn new(phi: &Diffeomorphism, x: &[f64]) -> Result<Self> {
        let d = phi.jacobian_matrix(x)?;
        let g_m = phi.source().metric_at(x)?;
        let g_n = phi.target().metric_at(&phi.forward(x))?;
        Ok(Self { pushed: d.transpose() * g_n * &d, source: g_m })
    }

    fn along(&self, v: &[f64]) -> f64 {
        let v = nalgebra::DVector::from_column_slice(v);
        (v.dot(&(&self.pushed * &v)) / v.dot(&(&self.source * &v))).sqrt()
    }

    /// Extreme stretches over the span of the columns of `basis`, from the
    /// generalised eigenproblem of the two restricted Gram matrices.
    fn extremes_on(&self, basis: &Matrix) -> Result<(f64, f64)> {
        let a = basis.transpose() * &self.pushed * basis;
        let b = basis.transpose() * &self.source * basis;
        let chol = b.cholesky().ok_or_else(|| Error::Argument("degenerate subspace".into()))?;
        let l_inv = chol
            .l()
            .solve_lower_triangular(&Matrix::identity(basis.ncols(), basis.ncols()))
            .ok_or_else(|| Error::Argument("degenerate subspace".into()))?;
        let whitened = &l_inv * a * l_inv.transpose();
        let sym = 0.5 * (&whitened + whitened.transpose());
        let eig = SymmetricEigen::new(sym).eigenvalues;
        let lo = eig.iter().copied().fold(f64::INFINITY, f64::min).max(0.0).sqrt();
        let hi = eig.iter().copied().fold(0.0, f64::max).sqrt();
        Ok((lo, hi))
    }
}

/// `α_i` (one-based `i`) from the minimax/maximin characterisations.
///
/// For `n = 2` a sweep over line directions gives both characterisations
/// at once. For `n = 3` random subspaces give `maximin ≤ α_i ≤ minimax`.
pub fn minimax_singular_oracle(phi: &Diffeomorphism, x: &[f64], i: usize) -> Result<SingularBracket> {
    let n = phi.dim();
    if i < 1 || i > n {
        return Err(Error::Argument(format!("singular value index {i} outside 1..={n}")));
    }
    let stretch = Stretch::new(phi, x)?;
    match n {
        2 => {
            let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
            for step in 0..SWEEP_ANGLES {
                let theta = std::f64::consts::PI * step as f64 / SWEEP_ANGLES as f64;
                let s = stretch.along(&[theta.cos(), theta.sin()]);
                lo = lo.min(s);
                hi = hi.max(s);
            }
            let v = if i == 1 { hi } else { lo };
            Ok(SingularBracket { maximin: v, minimax: v })
        }
        3 => {
            let mut rng = ChaCha8Rng::seed_from_u64(0xa1fa + i as u64);
            // minimax over (n - i + 1)-dimensional subspaces, maximin over i-dimensional ones
            let minimax = best_over_subspaces(&stretch, n, n - i + 1, &mut rng, |(_, hi)| hi, f64::min)?;
            let maximin = best_over_subspaces(&stretch, n, i, &mut rng, |(lo, _)| lo, f64::max)?;
            Ok(SingularBracket { maximin, minimax })
        }
        _ => Err(Error::NotImplemented(format!("minimax oracle for n = {n}"))),
    }
}

fn best_over_subspaces(
    stretch: &Stretch,
    n: usize,
    dim: usize,
    rng: &mut ChaCha8Rng,
    pick: impl Fn((f64, f64)) -> f64,
    combine: impl Fn(f64, f64) -> f64,
) -> Result<f64> {
    if dim == n {
        return Ok(pick(stretch.extremes_on(&Matrix::identity(n, n))?));
    }
    let mut best: Option<f64> = None;
    for _ in 0..SUBSPACE_SAMPLES {
        let basis = Matrix::from_fn(n, dim, |_, _| StandardNormal.sample(rng));
        let v = pick(stretch.extremes_on(&basis)?);
        best = Some(best.map_or(v, |b| combine(b, v)));
    }
    Ok(best.expect("at least one sample"))
}
