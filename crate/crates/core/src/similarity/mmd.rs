use serde::{Deserialize, Serialize};

use crate::distance::{rbf_kernel_matrix, Bandwidth};
use crate::error::{EvalError, Result};
use crate::matrix::Matrix;
use crate::seed::RunSeed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MmdEstimator {
    /// Square root of the V-statistic; never negative.
    #[default]
    Biased,
    /// Unbiased U-statistic estimate of the squared MMD; may dip below zero.
    Unbiased,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MmdResult {
    pub value: f64,
    pub sigma: f64,
    pub estimator: MmdEstimator,
}

/// Maximum mean discrepancy between `real` and `generated` under a Gaussian kernel.
pub fn mmd(
    real: &Matrix,
    generated: &Matrix,
    bandwidth: Bandwidth,
    estimator: MmdEstimator,
    seed: RunSeed,
) -> Result<MmdResult> {
    if real.is_empty() || generated.is_empty() {
        return Err(EvalError::Empty("MMD input set"));
    }
    generated.ensure_cols(real.ncols(), "mmd")?;
    let (n, m) = (real.nrows(), generated.nrows());
    if estimator == MmdEstimator::Unbiased && (n < 2 || m < 2) {
        return Err(EvalError::invalid("unbiased MMD needs at least 2 points per set"));
    }
    let (kxy, sigma) = rbf_kernel_matrix(real, generated, bandwidth, seed)?;
    let bw = Bandwidth::Fixed(sigma);
    let (kxx, _) = rbf_kernel_matrix(real, real, bw, seed)?;
    let (kyy, _) = rbf_kernel_matrix(generated, generated, bw, seed)?;
    let sum = |k: &Matrix| k.as_slice().iter().sum::<f64>();
    let trace = |k: &Matrix| (0..k.nrows()).map(|i| k.get(i, i)).sum::<f64>();
    let (nf, mf) = (n as f64, m as f64);
    let value = match estimator {
        MmdEstimator::Biased => {
            let sq = sum(&kxx) / (nf * nf) + sum(&kyy) / (mf * mf) - 2.0 * sum(&kxy) / (nf * mf);
            sq.max(0.0).sqrt()
        }
        MmdEstimator::Unbiased => {
            (sum(&kxx) - trace(&kxx)) / (nf * (nf - 1.0))
                + (sum(&kyy) - trace(&kyy)) / (mf * (mf - 1.0))
                - 2.0 * sum(&kxy) / (nf * mf)
        }
    };
    Ok(MmdResult {
        value,
        sigma,
        estimator,
    })
}
