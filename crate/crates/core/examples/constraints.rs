//! Constraint metrics on the ring problem, with closed-form constraints and
//! with labeled valid/invalid data.

use design_eval::constraints::{
    constraint_satisfaction, constraint_satisfaction_rate, nearest_invalid_datapoint,
    predicted_constraint_satisfaction, signed_distance_to_constraints, ConstraintSet,
};
use design_eval::distance::DistanceSpec;
use design_eval::seed::RunSeed;
use design_eval::synth::{sample_ring, RingProblem};
use design_eval::{Matrix, Result};
use rand::Rng;

fn main() -> Result<()> {
    let ring = RingProblem::default();
    let inner = ring;
    let outer = ring;
    let constraints = ConstraintSet::new()
        .with_sdf(move |x: &[f64]| inner.constraint_sdfs(x)[0])
        .with_sdf(move |x: &[f64]| outer.constraint_sdfs(x)[1]);

    let mut rng = RunSeed(3).rng();
    let rows: Vec<[f64; 2]> = (0..500).map(|_| [rng.random_range(-1.2..1.2), rng.random_range(-1.2..1.2)]).collect();
    let x = Matrix::from_rows(&rows)?;

    let all = constraint_satisfaction(&x, &constraints)?;
    let rate = constraint_satisfaction_rate(&x, &constraints)?;
    let sdf = signed_distance_to_constraints(&x, &constraints)?;
    println!("uniform box samples:");
    println!("  all constraints met: {:.3}", all.mean);
    println!("  fraction of constraints met: {:.3}", rate.mean);
    println!("  mean signed distance: {:.4}", sdf.iter().sum::<f64>() / sdf.len() as f64);

    let (valid, invalid) = sample_ring(&ring, 400, 400, RunSeed(4))?;
    let euclid = DistanceSpec::Euclidean;
    let predicted = predicted_constraint_satisfaction(&x, valid.designs(), invalid.designs(), 5, &euclid)?;
    let nearest_bad = nearest_invalid_datapoint(&x, invalid.designs(), &euclid)?;
    let n = x.nrows() as f64;
    println!("from labeled data only:");
    println!("  KNN-predicted validity: {:.3}", predicted.iter().sum::<f64>() / n);
    println!("  mean distance to nearest invalid datapoint: {:.4}", nearest_bad.iter().sum::<f64>() / n);
    Ok(())
}
