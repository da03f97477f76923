//! Orientation-preserving diffeomorphisms between chart domains and their
//! pointwise singular values.

pub mod builtin;
mod map;
mod minimax;

pub use map::{
    Diffeomorphism, MatrixMap, PointMap, SingularSpectrum, DEFAULT_FD_STEP, DEGENERACY_CUTOFF,
};
pub use minimax::{minimax_singular_oracle, SingularBracket, SUBSPACE_SAMPLES, SWEEP_ANGLES};
