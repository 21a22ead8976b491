//! Seeded generators for the 2-D benchmark problems.

use rand::distr::weighted::WeightedIndex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::data::{ColumnNames, DesignSet};
use crate::error::{EvalError, Result};
use crate::matrix::Matrix;
use crate::quality::pareto_front;
use crate::seed::RunSeed;

/// Mixture of six isotropic Gaussians with two dominant modes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SixModeSpec {
    pub centers: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
    pub stddev: f64,
    /// Condition = `cond_scale * |x|`; 0.2 puts the two main modes at 0.3.
    pub cond_scale: f64,
}

impl Default for SixModeSpec {
    fn default() -> Self {
        SixModeSpec {
            centers: vec![[-1.5, 0.0], [1.5, 0.0], [-0.5, 0.9], [0.5, 0.9], [-0.5, -0.9], [0.5, -0.9]],
            weights: vec![0.3, 0.3, 0.1, 0.1, 0.1, 0.1],
            stddev: 0.1,
            cond_scale: 0.2,
        }
    }
}

impl SixModeSpec {
    pub fn condition(&self, x: &[f64]) -> f64 {
        self.cond_scale * x.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    fn validate(&self) -> Result<()> {
        if self.centers.len() != self.weights.len() || self.centers.is_empty() {
            return Err(EvalError::invalid("six-mode spec needs one weight per center"));
        }
        if self.weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(EvalError::invalid("mode weights must be positive"));
        }
        if !(self.stddev.is_finite() && self.stddev >= 0.0) {
            return Err(EvalError::invalid("mode stddev must be non-negative"));
        }
        Ok(())
    }
}

/// Samples with conditions attached, plus the mode each sample came from.
pub fn sample_sixmode_with_modes(spec: &SixModeSpec, n: usize, seed: RunSeed) -> Result<(DesignSet, Vec<usize>)> {
    spec.validate()?;
    if n == 0 {
        return Err(EvalError::invalid("sample count must be positive"));
    }
    let mut rng = seed.rng();
    let pick = WeightedIndex::new(&spec.weights).map_err(|e| EvalError::invalid(e.to_string()))?;
    let mut data = Vec::with_capacity(2 * n);
    let mut modes = Vec::with_capacity(n);
    for _ in 0..n {
        let m = pick.sample(&mut rng);
        let c = spec.centers[m];
        for cj in c {
            let z: f64 = StandardNormal.sample(&mut rng);
            data.push(cj + spec.stddev * z);
        }
        modes.push(m);
    }
    let designs = Matrix::from_vec(n, 2, data)?;
    let conds: Vec<f64> = designs.rows().map(|r| spec.condition(r)).collect();
    let set = DesignSet::new(designs)?
        .with_conditions(Matrix::column_vector(&conds))?
        .with_names(ColumnNames {
            design: vec!["x1".into(), "x2".into()],
            conditions: vec!["c1".into()],
            ..Default::default()
        });
    Ok((set, modes))
}

pub fn sample_sixmode(spec: &SixModeSpec, n: usize, seed: RunSeed) -> Result<DesignSet> {
    Ok(sample_sixmode_with_modes(spec, n, seed)?.0)
}

/// A disk and a concentric ring, separated and surrounded by infeasible space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RingProblem {
    pub center: [f64; 2],
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

impl Default for RingProblem {
    fn default() -> Self {
        RingProblem {
            center: [0.0, 0.0],
            r1: 0.5,
            r2: 0.8,
            r3: 1.1,
        }
    }
}

impl RingProblem {
    pub fn new(center: [f64; 2], r1: f64, r2: f64, r3: f64) -> Result<Self> {
        if !(0.0 < r1 && r1 < r2 && r2 < r3 && r3.is_finite()) {
            return Err(EvalError::invalid(format!("ring radii must satisfy 0 < r1 < r2 < r3, got {r1}, {r2}, {r3}")));
        }
        Ok(RingProblem { center, r1, r2, r3 })
    }

    pub fn radius(&self, x: &[f64]) -> f64 {
        (x[0] - self.center[0]).hypot(x[1] - self.center[1])
    }

    /// Direct membership test, independent of [`ring_sdf`].
    pub fn contains(&self, x: &[f64]) -> bool {
        let rho = self.radius(x);
        rho < self.r1 || (rho > self.r2 && rho < self.r3)
    }
}

impl RingProblem {
    /// The feasible set as two constraints: outside the gap `(r1, r2)` and
    /// inside radius `r3`. Their minimum equals [`ring_sdf`].
    pub fn constraint_sdfs(&self, x: &[f64]) -> [f64; 2] {
        let rho = self.radius(x);
        [(self.r1 - rho).max(rho - self.r2), self.r3 - rho]
    }
}

/// Signed distance to the feasible set, positive inside.
pub fn ring_sdf(problem: &RingProblem, x: &[f64]) -> f64 {
    let rho = problem.radius(x);
    (problem.r1 - rho).max((rho - problem.r2).min(problem.r3 - rho))
}

fn uniform_disk(rng: &mut impl Rng, center: [f64; 2], radius: f64) -> [f64; 2] {
    let rho = radius * rng.random::<f64>().sqrt();
    let theta = std::f64::consts::TAU * rng.random::<f64>();
    [center[0] + rho * theta.cos(), center[1] + rho * theta.sin()]
}

fn ring_set(problem: &RingProblem, points: Vec<[f64; 2]>, valid: bool) -> Result<DesignSet> {
    let sdf: Vec<f64> = points.iter().map(|p| ring_sdf(problem, p)).collect();
    let n = points.len();
    Ok(DesignSet::from_rows(&points)?
        .with_valid(vec![valid; n])?
        .with_sdfs(Matrix::column_vector(&sdf))?
        .with_names(ColumnNames {
            design: vec!["x1".into(), "x2".into()],
            sdfs: vec!["sdf1".into()],
            ..Default::default()
        }))
}

/// Rejection sampling: valid points from the disk of radius `r3`, invalid
/// points from a disk extending one gap width beyond it.
pub fn sample_ring(problem: &RingProblem, n_valid: usize, n_invalid: usize, seed: RunSeed) -> Result<(DesignSet, DesignSet)> {
    let problem = RingProblem::new(problem.center, problem.r1, problem.r2, problem.r3)?;
    if n_valid == 0 || n_invalid == 0 {
        return Err(EvalError::invalid("ring sample counts must be positive"));
    }
    let mut rng = seed.rng();
    let mut valid = Vec::with_capacity(n_valid);
    while valid.len() < n_valid {
        let p = uniform_disk(&mut rng, problem.center, problem.r3);
        if ring_sdf(&problem, &p) > 0.0 {
            valid.push(p);
        }
    }
    let outer = problem.r3 + (problem.r2 - problem.r1);
    let mut invalid = Vec::with_capacity(n_invalid);
    while invalid.len() < n_invalid {
        let p = uniform_disk(&mut rng, problem.center, outer);
        if ring_sdf(&problem, &p) < 0.0 {
            invalid.push(p);
        }
    }
    Ok((ring_set(&problem, valid, true)?, ring_set(&problem, invalid, false)?))
}

/// Design coordinates are centered: `u` in `[-0.5, 0.5]^2` maps to the
/// classical `[0, 3]^2` domain by `x = 3 (u + 0.5)`.
pub const KNO1_HALF_WIDTH: f64 = 0.5;
/// Best (smallest) raw objective value over the domain, rounded down.
pub const KNO1_F_BEST: f64 = 1.6;
/// Worst raw objective value over the domain.
pub const KNO1_F_WORST: f64 = 20.0;

/// Raw KNO1 objectives (both minimized) on `[0, 3]^2`.
pub fn kno1_raw(x: &[f64]) -> Result<[f64; 2]> {
    if x.len() != 2 || x.iter().any(|v| !(0.0..=3.0).contains(v)) {
        return Err(EvalError::OutOfDomain(format!("KNO1 needs a point in [0, 3]^2, got {x:?}")));
    }
    let s = x[0] + x[1];
    let r = 9.0 - (3.0 * (2.5 * s * s).sin() + 3.0 * (4.0 * s).sin() + 5.0 * (2.0 * s + 2.0).sin());
    let phi = std::f64::consts::PI / 12.0 * (x[0] - x[1] + 3.0);
    Ok([20.0 - r * phi.cos(), 20.0 - r * phi.sin()])
}

/// KNO1 on centered coordinates, rescaled to `[0, 1]` and maximized.
pub fn kno1(u: &[f64]) -> Result<[f64; 2]> {
    if u.len() != 2 || u.iter().any(|v| !(v.abs() <= KNO1_HALF_WIDTH)) {
        return Err(EvalError::OutOfDomain(format!("KNO1 needs a point in [-0.5, 0.5]^2, got {u:?}")));
    }
    let x = [3.0 * (u[0] + 0.5), 3.0 * (u[1] + 0.5)];
    let f = kno1_raw(&x)?;
    Ok(f.map(|fi| (KNO1_F_WORST - fi) / (KNO1_F_WORST - KNO1_F_BEST)))
}

/// Uniform designs on the KNO1 domain with their objective values.
pub fn sample_kno1(n: usize, seed: RunSeed) -> Result<DesignSet> {
    if n == 0 {
        return Err(EvalError::invalid("sample count must be positive"));
    }
    let mut rng = seed.rng();
    let designs: Vec<[f64; 2]> = (0..n)
        .map(|_| [rng.random_range(-0.5..=0.5), rng.random_range(-0.5..=0.5)])
        .collect();
    kno1_set(Matrix::from_rows(&designs)?)
}

/// Attach KNO1 objectives to designs (which must lie in the domain).
pub fn kno1_set(designs: Matrix) -> Result<DesignSet> {
    let perf = designs.rows().map(kno1).collect::<Result<Vec<_>>>()?;
    Ok(DesignSet::new(designs)?
        .with_performance(Matrix::from_rows(&perf)?)?
        .with_names(ColumnNames {
            design: vec!["x1".into(), "x2".into()],
            performance: vec!["f1".into(), "f2".into()],
            ..Default::default()
        }))
}

/// Square grid of `side * side` designs covering the KNO1 domain.
pub fn kno1_grid(side: usize) -> Result<Matrix> {
    if side < 2 {
        return Err(EvalError::invalid("grid needs at least two points per side"));
    }
    let step = 1.0 / (side - 1) as f64;
    let axis: Vec<f64> = (0..side).map(|i| (-0.5 + i as f64 * step).min(0.5)).collect();
    let rows: Vec<[f64; 2]> = axis.iter().flat_map(|&a| axis.iter().map(move |&b| [a, b])).collect();
    Matrix::from_rows(&rows)
}

/// Non-dominated designs of a `side * side` grid, with their objectives.
pub fn kno1_front(side: usize) -> Result<DesignSet> {
    let grid = kno1_set(kno1_grid(side)?)?;
    let perf = grid.performance().expect("kno1 sets carry performance");
    grid.select(&pareto_front(perf))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sixmode_is_seeded_and_conditioned() {
        let spec = SixModeSpec::default();
        let a = sample_sixmode(&spec, 50, RunSeed(1)).unwrap();
        assert_eq!(a, sample_sixmode(&spec, 50, RunSeed(1)).unwrap());
        assert_ne!(a, sample_sixmode(&spec, 50, RunSeed(2)).unwrap());
        let conds = a.conditions().unwrap();
        for (i, r) in a.designs().rows().enumerate() {
            assert_eq!(conds.get(i, 0), spec.condition(r));
        }
        assert!((spec.condition(&[1.5, 0.0]) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn zero_stddev_hits_centers() {
        let spec = SixModeSpec {
            stddev: 0.0,
            ..Default::default()
        };
        let (set, modes) = sample_sixmode_with_modes(&spec, 30, RunSeed(3)).unwrap();
        for (r, m) in set.designs().rows().zip(modes) {
            assert_eq!(r, &spec.centers[m]);
        }
    }

    #[test]
    fn ring_sdf_values() {
        let p = RingProblem::new([0.0, 0.0], 1.0, 2.0, 3.0).unwrap();
        assert_eq!(ring_sdf(&p, &[0.0, 0.0]), 1.0);
        assert_eq!(ring_sdf(&p, &[1.5, 0.0]), -0.5);
        assert_eq!(ring_sdf(&p, &[3.0, 0.0]), 0.0);
        assert_eq!(ring_sdf(&p, &[0.0, 2.5]), 0.5);
        assert!(RingProblem::new([0.0, 0.0], 1.0, 1.0, 3.0).is_err());
        for rho in [0.0, 0.5, 1.0, 1.2, 1.5, 2.0, 2.7, 3.0, 3.5, 9.0] {
            let x = [rho * 0.6, rho * 0.8];
            let [a, b] = p.constraint_sdfs(&x);
            assert!((a.min(b) - ring_sdf(&p, &x)).abs() < 1e-12);
        }
    }

    #[test]
    fn ring_samples_respect_membership() {
        let p = RingProblem::default();
        let (valid, invalid) = sample_ring(&p, 300, 300, RunSeed(5)).unwrap();
        for r in valid.designs().rows() {
            let rho = p.radius(r);
            assert!(rho <= p.r1 || (p.r2..=p.r3).contains(&rho));
            assert!(ring_sdf(&p, r) > 0.0);
        }
        assert!(invalid.designs().rows().all(|r| ring_sdf(&p, r) < 0.0));
        assert_eq!(invalid.valid().unwrap(), &vec![false; 300][..]);
    }

    #[test]
    fn kno1_range_and_domain() {
        let grid = kno1_grid(50).unwrap();
        for r in grid.rows() {
            let f = kno1(r).unwrap();
            assert!(f.iter().all(|v| (0.0..=1.0).contains(v)));
        }
        assert!(kno1(&[0.6, 0.0]).is_err());
        assert!(kno1_raw(&[-0.1, 0.0]).is_err());
        let f = kno1_raw(&[0.0, 0.0]).unwrap();
        // s = 0: r = 9 - 5 sin 2, phi = pi / 4
        let r = 9.0 - 5.0 * 2f64.sin();
        assert!((f[0] - (20.0 - r * std::f64::consts::FRAC_1_SQRT_2)).abs() < 1e-12);
    }
}
