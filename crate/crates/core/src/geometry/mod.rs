//! Single-chart Riemannian domains and quadrature on them.

mod chart;
mod frame;
pub mod metrics;
mod quadrature;

pub use chart::{ChartDomain, Metric, MetricFn};
pub use frame::{orthonormal_frame, volume_density};
pub use quadrature::{
    gauss_legendre, integrate, integrate_values, node_densities, quadrature_nodes, sample_points,
    sup_norm_estimate, QuadratureRule,
};
pub(crate) use quadrature::sup_of_values;
