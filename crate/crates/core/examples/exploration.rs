//! Novelty and diversity of a generated set.

use design_eval::distance::DistanceSpec;
use design_eval::exploration::{
    convex_hull_volume, distance_to_centroid, dpp_diversity, entropy, inter_sample_distance,
    smallest_enclosing_hypersphere, Center, DppSettings, EntropyMode,
};
use design_eval::seed::RunSeed;
use design_eval::synth::{sample_sixmode, SixModeSpec};
use design_eval::{Matrix, Result};

fn report(label: &str, x: &Matrix) -> Result<()> {
    let isd = inter_sample_distance(x, 1, &DistanceSpec::Euclidean)?;
    let centroid = distance_to_centroid(x, Center::Centroid)?;
    let median = distance_to_centroid(x, Center::GeometricMedian)?;
    let hull = convex_hull_volume(x, None)?;
    let ball = smallest_enclosing_hypersphere(x)?;
    println!("{label}:");
    println!("  inter-sample distance {:.4}", isd.iter().sum::<f64>() / isd.len() as f64);
    println!("  distance to centroid {:.4}, to geometric median {:.4}", centroid.mean, median.mean);
    match entropy(x, EntropyMode::Knn { k: 3 }) {
        Ok(h) => println!("  KNN entropy {:.3} nats", h.value),
        Err(_) => {
            let h = entropy(x, EntropyMode::Histogram { bins: 10 })?;
            println!("  KNN entropy undefined (coincident points); histogram entropy {:.3} nats", h.value);
        }
    }
    println!("  convex hull area {:.3}, enclosing circle radius {:.3}", hull.volume, ball.radius);
    match dpp_diversity(x, DppSettings::default(), RunSeed(9)) {
        Ok(d) => println!("  DPP log-det {:.2}", d.value),
        Err(e) => println!("  DPP: {e}"),
    }
    Ok(())
}

fn main() -> Result<()> {
    let spec = SixModeSpec::default();
    report("six-mode sample", sample_sixmode(&spec, 400, RunSeed(1))?.designs())?;
    let spread = SixModeSpec {
        stddev: 0.4,
        ..spec
    };
    report("wider modes", sample_sixmode(&spread, 400, RunSeed(1))?.designs())?;
    // a set with repeated designs: the DPP kernel becomes singular
    let repeated = Matrix::from_rows(&[[0.3, 0.3]; 12])?.vstack(&Matrix::from_rows(&[[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])?)?;
    report("repeated designs", &repeated)?;
    Ok(())
}
