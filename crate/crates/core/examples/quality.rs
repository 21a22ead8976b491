//! Performance metrics on the KNO1 benchmark: hypervolume, generational
//! distance, target metrics, DTAI and optimality gap.

use design_eval::distance::DistanceSpec;
use design_eval::quality::{
    dtai, generational_distance, hypervolume, minimum_target_ratio, optimality_gap, pareto_front,
    reference_point, signed_distance_to_target, target_achievement_rate, DescentSettings, ParetoRef, TargetSpec,
};
use design_eval::seed::RunSeed;
use design_eval::synth::{kno1, kno1_front, sample_kno1};
use design_eval::Result;

fn main() -> Result<()> {
    let data = sample_kno1(1000, RunSeed(1))?;
    let generated = sample_kno1(200, RunSeed(2))?;
    let p = generated.performance().unwrap();
    let front = kno1_front(300)?;
    let along: Vec<f64> = front.designs().rows().map(|u| u[0] + u[1]).collect();
    println!(
        "analytic front: {} grid designs, x1 + x2 in [{:.4}, {:.4}]",
        front.len(),
        along.iter().copied().fold(f64::INFINITY, f64::min),
        along.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    );

    let reference = reference_point(data.performance().unwrap())?;
    println!("hypervolume vs dataset 1% point: {:.4}", hypervolume(p, &reference)?);
    println!("generated set has {} non-dominated designs", pareto_front(p).len());
    let gd = generational_distance(p, &ParetoRef::new(front.performance().unwrap().clone())?, &DistanceSpec::Euclidean)?;
    println!("mean generational distance: {:.4}", gd.iter().sum::<f64>() / gd.len() as f64);

    let targets = TargetSpec::new(vec![0.5, 0.5]).with_alpha_beta(vec![1.0, 1.0], vec![1.0, 1.0]);
    let mean = |f: &dyn Fn(&[f64]) -> Result<f64>| -> Result<f64> {
        Ok(p.rows().map(f).collect::<Result<Vec<_>>>()?.iter().sum::<f64>() / p.nrows() as f64)
    };
    println!("target achievement rate: {:.3}", mean(&|r| target_achievement_rate(r, &targets))?);
    println!("signed distance to target: {:.4}", mean(&|r| signed_distance_to_target(r, &targets))?);
    println!("minimum target ratio: {:.4}", mean(&|r| minimum_target_ratio(r, &targets))?);
    println!("DTAI: {:.4}", mean(&|r| dtai(r, &targets))?);

    // descend on -DTAI from one design, staying inside the domain
    let start = generated.designs().row(0).to_vec();
    let objective = |x: &[f64]| kno1(x).map_or(f64::NAN, |f| -dtai(&f, &targets).unwrap_or(f64::NAN));
    let settings = DescentSettings {
        lower: Some(vec![-0.5, -0.5]),
        upper: Some(vec![0.5, 0.5]),
        ..Default::default()
    };
    let gap = optimality_gap(&start, &objective, None, &settings)?;
    println!(
        "optimality gap from {:?}: moved {:.4} ({:.4} on the first step), DTAI +{:.4}",
        start, gap.design_space_gap, gap.instantaneous_design_gap, gap.objective_gap
    );
    Ok(())
}
