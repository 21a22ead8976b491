use rand::seq::index::sample;

use crate::distance::{nearest_distances, DistanceSpec};
use crate::error::{EvalError, Result};
use crate::matrix::Matrix;
use crate::seed::RunSeed;

/// For every generated sample, the distance to its nearest datapoint.
pub fn nearest_datapoint(generated: &Matrix, data: &Matrix, spec: &DistanceSpec) -> Result<Vec<f64>> {
    if data.is_empty() {
        return Err(EvalError::Empty("dataset"));
    }
    nearest_distances(generated, data, spec)
}

/// Seeded subsample of exactly `budget` rows, kept in original row order.
pub fn subsample(x: &Matrix, budget: usize, seed: RunSeed) -> Result<Matrix> {
    if budget == 0 {
        return Err(EvalError::invalid("sample budget must be positive"));
    }
    if budget > x.nrows() {
        return Err(EvalError::invalid(format!(
            "sample budget {budget} exceeds the {} generated samples",
            x.nrows()
        )));
    }
    if budget == x.nrows() {
        return Ok(x.clone());
    }
    let mut idx = sample(&mut seed.rng(), x.nrows(), budget).into_vec();
    idx.sort_unstable();
    Ok(x.select_rows(&idx))
}

/// For every datapoint, the distance to its nearest generated sample, using
/// a subsample of `budget` generated samples so scores are comparable
/// across models.
pub fn nearest_generated_sample(
    data: &Matrix,
    generated: &Matrix,
    budget: usize,
    spec: &DistanceSpec,
    seed: RunSeed,
) -> Result<Vec<f64>> {
    let sub = subsample(generated, budget, seed)?;
    nearest_distances(data, &sub, spec)
}

/// Nearest generated sample evaluated over held-out datapoints.
pub fn rediscovery(
    heldout: &Matrix,
    generated: &Matrix,
    budget: usize,
    spec: &DistanceSpec,
    seed: RunSeed,
) -> Result<Vec<f64>> {
    nearest_generated_sample(heldout, generated, budget, spec, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::mean;

    const E: DistanceSpec = DistanceSpec::Euclidean;

    #[test]
    fn nearest_datapoint_examples() {
        let data = Matrix::from_rows(&[[0.0, 0.0], [1.0, 0.0]]).unwrap();
        let gen = Matrix::from_rows(&[[0.25, 0.0], [1.0, 0.0]]).unwrap();
        assert_eq!(nearest_datapoint(&gen, &data, &E).unwrap(), vec![0.25, 0.0]);
        let more = data.vstack(&Matrix::from_rows(&[[0.3, 0.0]]).unwrap()).unwrap();
        let after = nearest_datapoint(&gen, &more, &E).unwrap();
        assert!(after.iter().zip([0.25, 0.0]).all(|(a, b)| *a <= b));
    }

    #[test]
    fn nearest_generated_examples() {
        let data = Matrix::column_vector(&[0.0, 10.0]);
        let gen = Matrix::column_vector(&[0.0]);
        assert_eq!(mean(&nearest_generated_sample(&data, &gen, 1, &E, RunSeed(0)).unwrap()), 5.0);
        let superset = Matrix::column_vector(&[10.0, 3.0, 0.0]);
        let d = nearest_generated_sample(&data, &superset, 3, &E, RunSeed(0)).unwrap();
        assert_eq!(d, vec![0.0, 0.0]);
        assert!(nearest_generated_sample(&data, &gen, 2, &E, RunSeed(0)).is_err());
    }

    #[test]
    fn rediscovery_examples() {
        let held = Matrix::from_rows(&[[5.0, 5.0]]).unwrap();
        let ring: Vec<[f64; 2]> = (0..12)
            .map(|k| {
                let t = k as f64 * std::f64::consts::TAU / 12.0;
                [5.0 + t.cos(), 5.0 + t.sin()]
            })
            .collect();
        let ring = Matrix::from_rows(&ring).unwrap();
        let d = rediscovery(&held, &ring, 12, &E, RunSeed(0)).unwrap();
        assert!((d[0] - 1.0).abs() < 1e-12);
        let with_exact = ring.vstack(&held).unwrap();
        assert_eq!(rediscovery(&held, &with_exact, 13, &E, RunSeed(0)).unwrap(), vec![0.0]);
        let far = ring.map(|v| v + 100.0);
        assert!(rediscovery(&held, &far, 12, &E, RunSeed(0)).unwrap()[0] >= 99.0 * 2f64.sqrt());
    }

    #[test]
    fn subsample_is_seeded_and_sized() {
        let x = Matrix::column_vector(&(0..50).map(f64::from).collect::<Vec<_>>());
        let a = subsample(&x, 7, RunSeed(3)).unwrap();
        assert_eq!(a.nrows(), 7);
        assert_eq!(a, subsample(&x, 7, RunSeed(3)).unwrap());
    }
}
