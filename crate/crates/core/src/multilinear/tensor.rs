use super::compound::{compound_with_table, minor_det};
use super::multi_index::{binomial, permutation_sign, MultiIndexTable};
use super::Matrix;
use crate::error::{Error, Result};

/// An alternating `k`-linear form on `R^n`, stored by its values on
/// increasing tuples of basis vectors: `coeffs[I] = A(e_{i1}, …, e_{ik})`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlternatingTensor {
    n: usize,
    k: usize,
    coeffs: Vec<f64>,
}

impl AlternatingTensor {
    pub fn new(n: usize, k: usize, coeffs: Vec<f64>) -> Result<Self> {
        if k > n {
            return Err(Error::DegreeOutOfRange { n, k });
        }
        let expected = binomial(n, k);
        if coeffs.len() != expected {
            return Err(Error::Shape(format!(
                "{}-form on R^{} needs {} coefficients, got {}",
                k,
                n,
                expected,
                coeffs.len()
            )));
        }
        Ok(Self { n, k, coeffs })
    }

    pub fn zero(n: usize, k: usize) -> Result<Self> {
        Self::new(n, k, vec![0.0; binomial(n, k)])
    }

    pub fn scalar(n: usize, value: f64) -> Self {
        Self { n, k: 0, coeffs: vec![value] }
    }

    /// The cobasis element `e^I` for a zero-based strictly increasing `index`.
    pub fn basis(n: usize, index: &[usize]) -> Result<Self> {
        let table = MultiIndexTable::new(n, index.len())?;
        let pos = table
            .position(index)
            .ok_or_else(|| Error::Shape(format!("{index:?} is not an increasing index in 0..{n}")))?;
        let mut coeffs = vec![0.0; table.rank()];
        coeffs[pos] = 1.0;
        Ok(Self { n, k: index.len(), coeffs })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn euclidean_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { n: self.n, k: self.k, coeffs: self.coeffs.iter().map(|c| s * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n || self.k != other.k {
            return Err(Error::Shape("adding forms of different type".into()));
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { n: self.n, k: self.k, coeffs })
    }

    /// `A(X₁, …, X_k) = Σ_I A_I · det(X[I, :])` with the `X_i` as columns.
    pub fn apply_to_vectors<V: AsRef<[f64]>>(&self, vectors: &[V]) -> Result<f64> {
        if vectors.len() != self.k {
            return Err(Error::Shape(format!(
                "{}-form applied to {} vectors",
                self.k,
                vectors.len()
            )));
        }
        if let Some(bad) = vectors.iter().find(|v| v.as_ref().len() != self.n) {
            return Err(Error::Shape(format!(
                "vector of length {} in R^{}",
                bad.as_ref().len(),
                self.n
            )));
        }
        let x = Matrix::from_fn(self.n, self.k, |i, j| vectors[j].as_ref()[i]);
        let cols: Vec<usize> = (0..self.k).collect();
        let table = MultiIndexTable::new(self.n, self.k)?;
        Ok(table
            .indices()
            .iter()
            .zip(&self.coeffs)
            .map(|(rows, c)| c * minor_det(&x, rows, &cols))
            .sum())
    }

    /// Exterior product with determinant normalisation (`e^1 ∧ e^2 = e^{12}`).
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Shape("wedge of forms over different dimensions".into()));
        }
        let n = self.n;
        let (j, k) = (self.k, other.k);
        if j + k > n {
            return Err(Error::DegreeOverflow { n, j, k });
        }
        let left = MultiIndexTable::new(n, j)?;
        let right = MultiIndexTable::new(n, k)?;
        let out = MultiIndexTable::new(n, j + k)?;
        let mut coeffs = vec![0.0; out.rank()];
        for (a_pos, a_idx) in left.indices().iter().enumerate() {
            let a = self.coeffs[a_pos];
            if a == 0.0 {
                continue;
            }
            for (b_pos, b_idx) in right.indices().iter().enumerate() {
                let b = other.coeffs[b_pos];
                if b == 0.0 {
                    continue;
                }
                let joined: Vec<usize> = a_idx.iter().chain(b_idx).copied().collect();
                let sign = permutation_sign(&joined);
                if sign == 0 {
                    continue;
                }
                let mut sorted = joined;
                sorted.sort_unstable();
                let pos = out.position(&sorted).expect("sorted union is a valid index");
                coeffs[pos] += f64::from(sign) * a * b;
            }
        }
        Ok(Self { n, k: j + k, coeffs })
    }

    /// Hodge star for the standard orientation: `⋆e^I = sign(I, Iᶜ) e^{Iᶜ}`.
    pub fn hodge_star(&self) -> Self {
        let table = MultiIndexTable::new(self.n, self.k).expect("valid degree");
        let dual = MultiIndexTable::new(self.n, self.n - self.k).expect("valid degree");
        let mut coeffs = vec![0.0; dual.rank()];
        for (pos, idx) in table.indices().iter().enumerate() {
            let comp = table.complement(pos);
            let joined: Vec<usize> = idx.iter().chain(&comp).copied().collect();
            let sign = f64::from(permutation_sign(&joined));
            let target = dual.position(&comp).expect("complement is increasing");
            coeffs[target] = sign * self.coeffs[pos];
        }
        Self { n: self.n, k: self.n - self.k, coeffs }
    }

    /// Interior product into the first slot: `(ι_v A)(Y…) = A(v, Y…)`.
    pub fn interior(&self, v: &[f64]) -> Result<Self> {
        if self.k == 0 {
            return Err(Error::DegreeOutOfRange { n: self.n, k: 0 });
        }
        if v.len() != self.n {
            return Err(Error::Shape(format!("vector of length {} in R^{}", v.len(), self.n)));
        }
        let table = MultiIndexTable::new(self.n, self.k)?;
        let lower = MultiIndexTable::new(self.n, self.k - 1)?;
        let mut coeffs = vec![0.0; lower.rank()];
        let mut rest = Vec::with_capacity(self.k - 1);
        for (pos, idx) in table.indices().iter().enumerate() {
            let c = self.coeffs[pos];
            if c == 0.0 {
                continue;
            }
            for p in 0..self.k {
                rest.clear();
                rest.extend(idx.iter().enumerate().filter(|(q, _)| *q != p).map(|(_, i)| *i));
                let target = lower.position(&rest).expect("sub-index is increasing");
                let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
                coeffs[target] += sign * v[idx[p]] * c;
            }
        }
        Ok(Self { n: self.n, k: self.k - 1, coeffs })
    }

    /// Precomposition with a linear map: `(A ∘ Φ)(X…) = A(ΦX₁, …, ΦX_k)`,
    /// i.e. coefficients `C_k(Φ)ᵀ · A`.
    pub fn pull_back(&self, phi: &Matrix) -> Result<Self> {
        if phi.nrows() != self.n || phi.ncols() != self.n {
            return Err(Error::Shape(format!(
                "{}x{} matrix acting on R^{}",
                phi.nrows(),
                phi.ncols(),
                self.n
            )));
        }
        let table = MultiIndexTable::new(self.n, self.k)?;
        let c = compound_with_table(phi, &table);
        let coeffs = (0..table.rank())
            .map(|i| (0..table.rank()).map(|j| c[(j, i)] * self.coeffs[j]).sum())
            .collect();
        Ok(Self { n: self.n, k: self.k, coeffs })
    }
}
