use super::multi_index::MultiIndexTable;
use super::Matrix;
use crate::error::{Error, Result};

/// Determinant of the submatrix selected by `rows` × `cols`.
pub fn minor_det(m: &Matrix, rows: &[usize], cols: &[usize]) -> f64 {
    debug_assert_eq!(rows.len(), cols.len());
    match rows.len() {
        0 => 1.0,
        1 => m[(rows[0], cols[0])],
        2 => {
            m[(rows[0], cols[0])] * m[(rows[1], cols[1])]
                - m[(rows[0], cols[1])] * m[(rows[1], cols[0])]
        }
        k => Matrix::from_fn(k, k, |i, j| m[(rows[i], cols[j])]).determinant(),
    }
}

/// The `k`-th compound (induced) matrix: entry `(I, J)` is the `k × k` minor
/// of `phi` on rows `I` and columns `J`, both in lexicographic order.
///
/// `compound(Φ, k)` is the matrix of `Λ^k Φ` acting on `k`-vectors, so it is
/// multiplicative and its top singular value is the product of the `k`
/// largest singular values of `Φ`.
pub fn compound(phi: &Matrix, k: usize) -> Result<Matrix> {
    if !phi.is_square() {
        return Err(Error::Shape(format!(
            "compound needs a square matrix, got {}x{}",
            phi.nrows(),
            phi.ncols()
        )));
    }
    let table = MultiIndexTable::new(phi.nrows(), k)?;
    Ok(compound_with_table(phi, &table))
}

pub(crate) fn compound_with_table(phi: &Matrix, table: &MultiIndexTable) -> Matrix {
    let r = table.rank();
    Matrix::from_fn(r, r, |i, j| minor_det(phi, table.get(i), table.get(j)))
}

/// Coefficients of `X₁ ∧ … ∧ X_k` where the `X_i` are the columns of `x`
/// (an `n × k` matrix): the maximal minors over each row multi-index.
pub fn wedge_of_columns(x: &Matrix) -> Result<Vec<f64>> {
    let table = MultiIndexTable::new(x.nrows(), x.ncols())?;
    let cols: Vec<usize> = (0..x.ncols()).collect();
    Ok(table
        .indices()
        .iter()
        .map(|rows| minor_det(x, rows, &cols))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
        Matrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0))
    }

    #[test]
    fn diagonal_compound_is_pairwise_products() {
        let d = Matrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, 2.0, 1.0]));
        let c = compound(&d, 2).unwrap();
        let expected =
            Matrix::from_diagonal(&nalgebra::DVector::from_vec(vec![6.0, 3.0, 2.0]));
        assert_eq!(c, expected);
    }

    #[test]
    fn identity_compound_is_identity() {
        for n in 1..=6 {
            for k in 0..=n {
                let c = compound(&Matrix::identity(n, n), k).unwrap();
                assert_eq!(c, Matrix::identity(c.nrows(), c.nrows()));
            }
        }
    }

    #[test]
    fn edge_degrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_matrix(&mut rng, 4);
        assert_eq!(compound(&m, 0).unwrap(), Matrix::identity(1, 1));
        assert_eq!(compound(&m, 1).unwrap(), m);
        assert_relative_eq!(compound(&m, 4).unwrap()[(0, 0)], m.determinant(), epsilon = 1e-14);
    }

    #[test]
    fn rejects_nonsquare() {
        assert!(matches!(compound(&Matrix::zeros(2, 3), 1), Err(Error::Shape(_))));
    }

    // Cauchy–Binet: each side is computed from its own minors.
    #[test]
    fn multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 4);
            let b = random_matrix(&mut rng, 4);
            let lhs = compound(&(&a * &b), 2).unwrap();
            let rhs = compound(&a, 2).unwrap() * compound(&b, 2).unwrap();
            assert!((lhs - rhs).amax() < 1e-10);
        }
    }

    #[test]
    fn compound_maps_wedges_of_columns() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for k in 0..=4 {
            let phi = random_matrix(&mut rng, 4);
            let x = Matrix::from_fn(4, k, |_, _| rng.random_range(-1.0..1.0));
            let lhs = compound(&phi, k).unwrap() * nalgebra::DVector::from_vec(wedge_of_columns(&x).unwrap());
            let rhs = wedge_of_columns(&(&phi * &x)).unwrap();
            for (a, b) in lhs.iter().zip(&rhs) {
                assert_relative_eq!(*a, *b, epsilon = 1e-12);
            }
        }
    }
}
