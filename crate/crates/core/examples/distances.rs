//! Distance strategies for different design representations.

use design_eval::distance::{pairwise, point_set_distance, DistanceSpec, PointSetKind};
use design_eval::{Matrix, Result};

fn main() -> Result<()> {
    let a = Matrix::from_rows(&[[0.0, 0.0, 1.0], [3.0, 4.0, 0.0]])?;
    for spec in [
        DistanceSpec::Euclidean,
        DistanceSpec::Manhattan,
        DistanceSpec::Chebyshev,
        DistanceSpec::Cosine,
    ] {
        println!("{:>10}: {:.4}", spec.name(), spec.eval(a.row(0), a.row(1)));
    }

    // categorical designs encoded as integers
    let cats = Matrix::from_rows(&[[1.0, 2.0, 0.0, 3.0], [1.0, 0.0, 0.0, 2.0]])?;
    let hamming = DistanceSpec::Hamming { normalized: true };
    hamming.validate(&cats)?;
    println!("   hamming: {:.2} of positions differ", hamming.eval(cats.row(0), cats.row(1)));

    // point clouds flattened into rows of (x, y) pairs
    let square = Matrix::from_rows(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])?;
    let shifted = square.map(|v| v + 0.1);
    for kind in [PointSetKind::Chamfer, PointSetKind::Hausdorff] {
        let d = point_set_distance(&square, &shifted, kind, &DistanceSpec::Euclidean)?;
        println!("{:>10}: {d:.4}", format!("{kind:?}").to_lowercase());
    }
    let flat = Matrix::from_vec(2, 8, [square.as_slice(), shifted.as_slice()].concat())?;
    let d = pairwise(&flat, &flat, &DistanceSpec::Hausdorff { point_dim: 2 })?;
    println!("pairwise Hausdorff on flattened clouds: {:?}", d.to_rows());
    Ok(())
}
