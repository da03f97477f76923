//! Bound factors for pushforwards and pullbacks and two-sided certificates.

mod certificate;
mod factors;

pub use crate::exponent::{conjugate_exponent, Exponent};
pub use certificate::{certify, BoundCertificate, CertifyOptions, Certifier, Direction, TransportedSamples};
pub use factors::{
    density_factors, kform_factors, pullback_factors, pullback_factors_from_alphas, scalar_factors, BoundFactors,
    SpectralSamples,
};

#[cfg(test)]
mod tests;
