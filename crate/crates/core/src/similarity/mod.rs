//! Statistical similarity between generated samples and the dataset.

mod efficacy;
pub mod kmeans;
mod mmd;
mod nearest;
mod prd;

pub use efficacy::{knn_regress, ml_efficacy, r2_score};
pub use kmeans::{kmeans, KMeans};
pub use mmd::{mmd, MmdEstimator, MmdResult};
pub use nearest::{nearest_datapoint, nearest_generated_sample, rediscovery, subsample};
pub use prd::{
    f_beta, lambda_grid, pr_auc, pr_from_histograms, prd_curve, write_pr_curve_csv, PrCurve,
    PrdSettings,
};
