use serde::{Deserialize, Serialize};

use super::design_set::DesignSet;
use crate::error::{EvalError, Result};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScaleMethod {
    #[default]
    None,
    MinMax,
    ZScore,
}

/// Per-column affine map `(x - offset) / scale`, fitted on a reference set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleStats {
    pub method: ScaleMethod,
    pub offset: Vec<f64>,
    pub scale: Vec<f64>,
    /// Columns left unscaled because their spread was zero.
    pub warnings: Vec<String>,
}

impl ScaleStats {
    pub fn fit(x: &Matrix, method: ScaleMethod) -> ScaleStats {
        let d = x.ncols();
        let mut offset = vec![0.0; d];
        let mut scale = vec![1.0; d];
        let mut warnings = Vec::new();
        for j in 0..d {
            let col = x.column(j);
            let (o, s) = match method {
                ScaleMethod::None => (0.0, 1.0),
                ScaleMethod::MinMax => {
                    let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
                    let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    (lo, hi - lo)
                }
                ScaleMethod::ZScore => {
                    let n = col.len() as f64;
                    let mean = col.iter().sum::<f64>() / n;
                    let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
                    (mean, var.sqrt())
                }
            };
            if method != ScaleMethod::None && s <= 0.0 {
                warnings.push(format!("column {j} has zero spread; left unscaled"));
                continue;
            }
            offset[j] = o;
            scale[j] = s;
        }
        ScaleStats {
            method,
            offset,
            scale,
            warnings,
        }
    }

    pub fn apply(&self, x: &Matrix) -> Result<Matrix> {
        x.ensure_cols(self.offset.len(), "scaling stats")?;
        if self.method == ScaleMethod::None {
            return Ok(x.clone());
        }
        let mut out = x.clone();
        for i in 0..out.nrows() {
            for (j, v) in out.row_mut(i).iter_mut().enumerate() {
                *v = (*v - self.offset[j]) / self.scale[j];
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone)]
pub struct Scaled {
    pub set: DesignSet,
    pub stats: ScaleStats,
}

/// Scale design columns. When `stats` is given (typically fitted on the
/// reference set) it is reused as is, so both sets share one space.
pub fn scale_features(
    set: &DesignSet,
    method: ScaleMethod,
    stats: Option<&ScaleStats>,
) -> Result<Scaled> {
    let stats = match stats {
        Some(s) => {
            if s.offset.len() != set.dim() {
                return Err(EvalError::DimensionMismatch {
                    context: "scaling stats",
                    expected: set.dim(),
                    found: s.offset.len(),
                });
            }
            s.clone()
        }
        None => ScaleStats::fit(set.designs(), method),
    };
    let designs = stats.apply(set.designs())?;
    Ok(Scaled {
        set: set.with_designs(designs),
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(vals: &[f64]) -> DesignSet {
        DesignSet::new(Matrix::column_vector(vals)).unwrap()
    }

    #[test]
    fn minmax_maps_to_unit_interval() {
        let out = scale_features(&col(&[0.0, 2.0, 4.0]), ScaleMethod::MinMax, None).unwrap();
        assert_eq!(out.set.designs().column(0), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn none_is_identity() {
        let set = col(&[3.0, -1.0]);
        let out = scale_features(&set, ScaleMethod::None, None).unwrap();
        assert_eq!(out.set, set);
    }

    #[test]
    fn zscore_constant_column_warns() {
        let out = scale_features(&col(&[1.0, 1.0, 1.0]), ScaleMethod::ZScore, None).unwrap();
        assert_eq!(out.set.designs().column(0), vec![1.0, 1.0, 1.0]);
        assert_eq!(out.stats.warnings.len(), 1);
    }

    #[test]
    fn reference_stats_reused_on_second_set() {
        let reference = scale_features(&col(&[0.0, 10.0]), ScaleMethod::MinMax, None).unwrap();
        let other = scale_features(&col(&[5.0, 20.0]), ScaleMethod::MinMax, Some(&reference.stats)).unwrap();
        assert_eq!(other.set.designs().column(0), vec![0.5, 2.0]);
    }

    #[test]
    fn stats_dimension_checked() {
        let stats = ScaleStats::fit(&Matrix::from_rows(&[[0.0, 1.0]]).unwrap(), ScaleMethod::MinMax);
        assert!(scale_features(&col(&[1.0]), ScaleMethod::MinMax, Some(&stats)).is_err());
    }
}
