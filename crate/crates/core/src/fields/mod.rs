//! Differential forms on charts: transport by diffeomorphisms and norms.

mod form;
mod norms;

pub use form::{pullback, pushforward, CoeffFn, FormField, MaskFn};
pub use norms::{
    lp_from_node_values, lp_norm, lp_norm_with, pointwise_norm, pointwise_norm_with, pointwise_norms,
    verify_pointwise_bounds, BoundDirection, PointwiseReport, DEFAULT_SUP_SAMPLES,
};
