//! The symbol `m̂` on AN and its K-average `m̃`.

pub mod average;
pub mod cases;
pub mod direct;
pub mod geometry;
pub mod region;

pub use average::{
    iwasawa_image_coords, m_hat, m_hat_routed, m_tilde, m_tilde_k_average, m_tilde_r, m_tilde_with, theta_splits,
    MHatRoute,
};
pub use cases::{case8_d2_gx, case8_d2_kernel, m_hat_case, m_hat_partials, Partials};
pub use direct::{m_hat_direct, DirectMode};
pub use geometry::{
    boundary_values, classify_case, intersections, theta_boundaries, BoundaryValues, CaseRegime, Intersections,
    ThetaBoundaries, DEFAULT_HYBRID_MARGIN,
};
pub use region::{region_polylines, Polyline};
