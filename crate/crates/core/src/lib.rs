//! Singular values of diffeomorphisms between Riemannian chart domains and
//! two-sided `L^p` bounds for pushforwards and pullbacks of differential forms.

pub mod certify;
pub mod diffeo;
pub mod error;
pub mod exponent;
pub mod fields;
pub mod geometry;
pub mod multilinear;

pub use error::{Error, Result};
pub use exponent::{conjugate_exponent, Exponent};
pub use multilinear::Matrix;
