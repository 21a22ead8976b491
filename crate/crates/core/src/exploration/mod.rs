//! Design-space exploration and diversity metrics.

mod dpp;
mod entropy;
mod hull;
mod sphere;
mod spread;

pub use dpp::{dpp_diversity, dpp_kernel, log_det_cholesky, DppResult, DppSettings, COLLAPSE_PIVOT, DPP_JITTER};
pub use entropy::{discrete_entropy, entropy, EntropyMode, EntropyResult};
pub use hull::{convex_hull_volume, pca_project, HullResult};
pub use sphere::{ball_volume, smallest_enclosing_hypersphere, EnclosingSphere, CORESET_EPS, EXACT_MAX_DIM};
pub use spread::{
    distance_to_centroid, geometric_median, inter_sample_distance, Center, CenterDistances, WEISZFELD_MAX_ITER,
    WEISZFELD_TOL,
};
