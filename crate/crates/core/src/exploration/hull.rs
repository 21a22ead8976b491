//! Convex hull volume in a principal-component embedding of dimension ≤ 3.

use std::collections::HashMap;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::catalog::Requirement;
use crate::error::{EvalError, Result};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq)]
pub struct HullResult {
    pub volume: f64,
    pub embedding_dim: usize,
    /// Indices of input rows on the hull.
    pub vertices: Vec<usize>,
    /// Points are affinely dependent in the embedding; volume is 0.
    pub degenerate: bool,
}

/// Relative tolerance for orientation tests.
const REL_EPS: f64 = 1e-12;

/// Project onto the top `k` principal components of `x` (centered).
pub fn pca_project(x: &Matrix, k: usize) -> Result<Matrix> {
    let (n, d) = (x.nrows(), x.ncols());
    if k == 0 || k > d {
        return Err(EvalError::missing(
            format!("embedding of dimension {k} from {d} columns"),
            Requirement::Emb,
        ));
    }
    let mean = x.mean_row();
    let centered = DMatrix::from_fn(n, d, |i, j| x.get(i, j) - mean[j]);
    let cov = centered.transpose() * &centered / (n.max(2) - 1) as f64;
    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let basis = DMatrix::from_fn(d, k, |i, j| eig.eigenvectors[(i, order[j])]);
    let proj = centered * basis;
    Matrix::from_vec(n, k, (0..n).flat_map(|i| (0..k).map(move |j| (i, j))).map(|(i, j)| proj[(i, j)]).collect())
}

/// Hull volume of `x`. With `embedding_dim` (default `min(d, 3)`) below `d`,
/// points are first projected onto their leading principal components.
pub fn convex_hull_volume(x: &Matrix, embedding_dim: Option<usize>) -> Result<HullResult> {
    let d = x.ncols();
    let k = embedding_dim.unwrap_or(d.min(3));
    if !(1..=3).contains(&k) || k > d {
        return Err(EvalError::missing(
            format!("convex_hull (embedding dim {k}, data dim {d})"),
            Requirement::Emb,
        ));
    }
    if x.nrows() < k + 1 {
        return Err(EvalError::invalid(format!(
            "a {k}-D hull needs at least {} points, got {}",
            k + 1,
            x.nrows()
        )));
    }
    let pts = if k == d { x.clone() } else { pca_project(x, k)? };
    let (volume, vertices) = match k {
        1 => hull_1d(&pts),
        2 => hull_2d(&pts),
        _ => hull_3d(&pts),
    };
    Ok(HullResult {
        volume,
        embedding_dim: k,
        degenerate: volume == 0.0,
        vertices,
    })
}

fn extent(pts: &Matrix) -> f64 {
    (0..pts.ncols())
        .map(|j| {
            let c = pts.column(j);
            let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            hi - lo
        })
        .fold(0.0, f64::max)
}

fn hull_1d(pts: &Matrix) -> (f64, Vec<usize>) {
    let c = pts.column(0);
    let lo = (0..c.len()).min_by(|&a, &b| c[a].total_cmp(&c[b])).unwrap_or(0);
    let hi = (0..c.len()).max_by(|&a, &b| c[a].total_cmp(&c[b]).then(b.cmp(&a))).unwrap_or(0);
    let len = c[hi] - c[lo];
    if len <= 0.0 {
        (0.0, vec![lo])
    } else {
        (len, vec![lo, hi])
    }
}

fn cross(o: &[f64], a: &[f64], b: &[f64]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Andrew's monotone chain. Returns (area, counter-clockwise vertex indices).
fn hull_2d(pts: &Matrix) -> (f64, Vec<usize>) {
    let mut idx: Vec<usize> = (0..pts.nrows()).collect();
    idx.sort_by(|&a, &b| {
        let (p, q) = (pts.row(a), pts.row(b));
        p[0].total_cmp(&q[0]).then(p[1].total_cmp(&q[1])).then(a.cmp(&b))
    });
    idx.dedup_by(|a, b| pts.row(*a) == pts.row(*b));
    if idx.len() < 3 {
        return (0.0, idx);
    }
    let mut hull: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(idx.iter())
        } else {
            Box::new(idx.iter().rev())
        };
        for &i in iter {
            while hull.len() >= start + 2
                && cross(pts.row(hull[hull.len() - 2]), pts.row(hull[hull.len() - 1]), pts.row(i)) <= 0.0
            {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    let area = 0.5
        * (0..hull.len())
            .map(|i| {
                let (p, q) = (pts.row(hull[i]), pts.row(hull[(i + 1) % hull.len()]));
                p[0] * q[1] - q[0] * p[1]
            })
            .sum::<f64>();
    let scale = extent(pts);
    if hull.len() < 3 || area.abs() <= REL_EPS * scale * scale {
        // collinear: report the two extreme points
        let ends = vec![idx[0], idx[idx.len() - 1]];
        return (0.0, ends);
    }
    (area.abs(), hull)
}

fn sub(a: &[f64], b: &[f64]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm3(a: [f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

struct Face {
    v: [usize; 3],
    normal: [f64; 3],
    offset: f64,
    alive: bool,
}

/// Incremental 3-D hull. Returns (volume, vertex indices).
fn hull_3d(pts: &Matrix) -> (f64, Vec<usize>) {
    let n = pts.nrows();
    let scale = extent(pts);
    let eps = REL_EPS * scale.max(f64::MIN_POSITIVE) * 1e2;
    let p = |i: usize| pts.row(i);

    // Initial simplex: extreme point, farthest point, farthest from line, farthest from plane.
    let i0 = (0..n)
        .min_by(|&a, &b| p(a)[0].total_cmp(&p(b)[0]).then(a.cmp(&b)))
        .unwrap_or(0);
    let far = |f: &dyn Fn(usize) -> f64| {
        (0..n).fold((0usize, -1.0f64), |best, i| {
            let v = f(i);
            if v > best.1 { (i, v) } else { best }
        })
    };
    let (i1, d1) = far(&|i| norm3(sub(p(i), p(i0))));
    if d1 <= eps {
        return (0.0, vec![i0]);
    }
    let line = sub(p(i1), p(i0));
    let (i2, d2) = far(&|i| norm3(cross3(line, sub(p(i), p(i0)))) / d1);
    if d2 <= eps {
        return (0.0, vec![i0, i1]);
    }
    let plane_n = cross3(line, sub(p(i2), p(i0)));
    let pn = norm3(plane_n);
    let (i3, d3) = far(&|i| dot3(plane_n, sub(p(i), p(i0))).abs() / pn);
    if d3 <= eps {
        return (0.0, vec![i0, i1, i2]);
    }

    let simplex = [i0, i1, i2, i3];
    let interior: [f64; 3] = {
        let mut c = [0.0; 3];
        for &i in &simplex {
            for (k, ck) in c.iter_mut().enumerate() {
                *ck += p(i)[k] / 4.0;
            }
        }
        c
    };
    let make_face = |a: usize, b: usize, c: usize| -> Face {
        let mut v = [a, b, c];
        let mut normal = cross3(sub(p(b), p(a)), sub(p(c), p(a)));
        if dot3(normal, sub(&interior, p(a))) > 0.0 {
            v.swap(1, 2);
            normal = [-normal[0], -normal[1], -normal[2]];
        }
        let len = norm3(normal);
        let normal = [normal[0] / len, normal[1] / len, normal[2] / len];
        let pa = p(v[0]);
        let offset = dot3(normal, [pa[0], pa[1], pa[2]]);
        Face {
            v,
            normal,
            offset,
            alive: true,
        }
    };
    let mut faces = vec![
        make_face(i0, i1, i2),
        make_face(i0, i1, i3),
        make_face(i0, i2, i3),
        make_face(i1, i2, i3),
    ];

    for q in 0..n {
        if simplex.contains(&q) {
            continue;
        }
        let x = p(q);
        let xv = [x[0], x[1], x[2]];
        let visible: Vec<usize> = (0..faces.len())
            .filter(|&f| faces[f].alive && dot3(faces[f].normal, xv) - faces[f].offset > eps)
            .collect();
        if visible.is_empty() {
            continue;
        }
        // Directed edges of visible faces; an edge is on the horizon when its
        // reverse does not also belong to a visible face.
        let mut edges: HashMap<(usize, usize), ()> = HashMap::new();
        for &f in &visible {
            let v = faces[f].v;
            for k in 0..3 {
                edges.insert((v[k], v[(k + 1) % 3]), ());
            }
        }
        let mut horizon: Vec<(usize, usize)> = edges
            .keys()
            .filter(|(a, b)| !edges.contains_key(&(*b, *a)))
            .copied()
            .collect();
        horizon.sort_unstable();
        for &f in &visible {
            faces[f].alive = false;
        }
        for (a, b) in horizon {
            faces.push(make_face(a, b, q));
        }
    }

    let mut volume = 0.0;
    let mut verts: Vec<usize> = Vec::new();
    for f in faces.iter().filter(|f| f.alive) {
        let [a, b, c] = f.v;
        volume += dot3(sub(p(a), &interior), cross3(sub(p(b), &interior), sub(p(c), &interior))) / 6.0;
        verts.extend_from_slice(&f.v);
    }
    verts.sort_unstable();
    verts.dedup();
    (volume.abs(), verts)
}
