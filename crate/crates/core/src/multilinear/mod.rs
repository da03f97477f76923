//! Exterior algebra over `R^n` with its Euclidean inner product.

mod comass;
pub(crate) mod compound;
mod multi_index;
mod svd;
mod tensor;

pub use comass::{comass_norm, comass_norm_with, ComassOptions};
pub use compound::{compound, minor_det, wedge_of_columns};
pub use multi_index::{binomial, lex_multi_indices, permutation_sign, MultiIndexTable};
pub use svd::singular_values;
pub use tensor::AlternatingTensor;

/// Dense real matrix used throughout the crate.
pub type Matrix = nalgebra::DMatrix<f64>;
