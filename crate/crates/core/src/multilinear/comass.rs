use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::tensor::AlternatingTensor;

/// Settings for the iterative comass computation used when `1 < k < n - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComassOptions {
    /// Random starting frames tried in addition to the largest-coefficient start.
    pub restarts: usize,
    /// Relative improvement below which a run is considered converged.
    pub tol: f64,
    /// Maximum number of full sweeps over the slots per run.
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for ComassOptions {
    fn default() -> Self {
        Self { restarts: 16, tol: 1e-10, max_iter: 200, seed: 0x5eed_c0de }
    }
}

/// Comass (spectral) norm of an alternating tensor in an orthonormal frame:
/// the maximum of `|A(X₁, …, X_k)|` over unit vectors `X_i`.
pub fn comass_norm(a: &AlternatingTensor) -> f64 {
    comass_norm_with(a, &ComassOptions::default())
}

pub fn comass_norm_with(a: &AlternatingTensor, opts: &ComassOptions) -> f64 {
    let (n, k) = (a.dim(), a.degree());
    // Every k-vector is decomposable in these degrees, so the sup over unit
    // simple k-vectors is the whole unit sphere of Λ^k.
    if k <= 1 || k + 1 >= n {
        return a.euclidean_norm();
    }
    if a.coeffs().iter().all(|c| *c == 0.0) {
        return 0.0;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best = ascend(a, largest_coefficient_start(a), opts);
    for _ in 0..opts.restarts {
        let start = (0..k)
            .map(|_| {
                let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
                normalized(v)
            })
            .collect();
        best = best.max(ascend(a, start, opts));
    }
    best.min(a.euclidean_norm())
}

fn largest_coefficient_start(a: &AlternatingTensor) -> Vec<Vec<f64>> {
    let n = a.dim();
    let (pos, _) = a
        .coeffs()
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
        .expect("nonempty coefficients");
    let table = super::MultiIndexTable::new(n, a.degree()).expect("valid degree");
    table
        .get(pos)
        .iter()
        .map(|&i| {
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            v
        })
        .collect()
}

/// Block-coordinate ascent: each slot in turn is replaced by the unit vector
/// maximising the form with the other slots held fixed, which is the
/// normalised gradient `g_i = A(…, e_i, …)`.
fn ascend(a: &AlternatingTensor, mut frame: Vec<Vec<f64>>, opts: &ComassOptions) -> f64 {
    let k = a.degree();
    let mut value = 0.0f64;
    for _ in 0..opts.max_iter {
        let previous = value;
        for slot in 0..k {
            let g = slot_gradient(a, &frame, slot);
            let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                continue;
            }
            value = value.max(norm);
            frame[slot] = g.into_iter().map(|x| x / norm).collect();
        }
        if value - previous <= opts.tol * value {
            break;
        }
    }
    value
}

/// Coefficients of the 1-form `v ↦ A(X₁, …, X̂_slot, …, X_k, v)`.
fn slot_gradient(a: &AlternatingTensor, frame: &[Vec<f64>], slot: usize) -> Vec<f64> {
    let mut reduced = a.clone();
    for (j, x) in frame.iter().enumerate() {
        if j != slot {
            reduced = reduced.interior(x).expect("degree and length checked");
        }
    }
    reduced.into_coeffs()
}

fn normalized(v: Vec<f64>) -> Vec<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        let mut e = vec![0.0; v.len()];
        e[0] = 1.0;
        return e;
    }
    v.into_iter().map(|x| x / norm).collect()
}
