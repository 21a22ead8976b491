//! Exact nearest-neighbor queries.
//!
//! Small workloads are answered by brute force. Above
//! [`BRUTE_FORCE_BUDGET`] distance evaluations a k-d tree is used for the
//! coordinate-bounded metrics. Both paths evaluate distances with the same
//! function and order ties by index, so they return identical results.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use super::DistanceSpec;
use crate::error::{EvalError, Result};
use crate::matrix::Matrix;

pub const BRUTE_FORCE_BUDGET: usize = 10_000_000;
const LEAF_SIZE: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub distance: f64,
}

impl Neighbor {
    fn cmp_key(&self, other: &Self) -> Ordering {
        self.distance
            .total_cmp(&other.distance)
            .then(self.index.cmp(&other.index))
    }
}

impl Eq for Neighbor {}

impl PartialOrd for Neighbor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Neighbor {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_key(other)
    }
}

enum Node {
    Leaf {
        start: usize,
        end: usize,
    },
    Split {
        left: Box<Node>,
        right: Box<Node>,
        // bounding boxes of the children, for pruning
        left_box: (Vec<f64>, Vec<f64>),
        right_box: (Vec<f64>, Vec<f64>),
    },
}

struct KdTree {
    order: Vec<usize>,
    root: Node,
}

pub struct NeighborIndex<'a> {
    data: &'a Matrix,
    spec: DistanceSpec,
    tree: Option<KdTree>,
}

impl<'a> NeighborIndex<'a> {
    /// Index `data` for roughly `n_queries` queries.
    pub fn new(data: &'a Matrix, spec: DistanceSpec, n_queries: usize) -> Result<Self> {
        if data.is_empty() {
            return Err(EvalError::Empty("neighbor reference set"));
        }
        spec.validate(data)?;
        let work = data.nrows().saturating_mul(n_queries.max(1));
        let tree = (spec.is_coordinate_bounded() && work > BRUTE_FORCE_BUDGET)
            .then(|| KdTree::build(data));
        Ok(NeighborIndex { data, spec, tree })
    }

    /// Always brute force, whatever the workload.
    pub fn brute_force(data: &'a Matrix, spec: DistanceSpec) -> Result<Self> {
        if data.is_empty() {
            return Err(EvalError::Empty("neighbor reference set"));
        }
        spec.validate(data)?;
        Ok(NeighborIndex {
            data,
            spec,
            tree: None,
        })
    }

    /// Always build the tree (coordinate-bounded metrics only).
    pub fn tree(data: &'a Matrix, spec: DistanceSpec) -> Result<Self> {
        let mut idx = Self::brute_force(data, spec)?;
        if !spec.is_coordinate_bounded() {
            return Err(EvalError::invalid(format!(
                "k-d tree does not support {} distance",
                spec.name()
            )));
        }
        idx.tree = Some(KdTree::build(data));
        Ok(idx)
    }

    pub fn len(&self) -> usize {
        self.data.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn uses_tree(&self) -> bool {
        self.tree.is_some()
    }

    /// The `k` nearest rows to `query`, sorted by (distance, index).
    /// `exclude` drops one row index (for self-queries).
    pub fn knn(&self, query: &[f64], k: usize, exclude: Option<usize>) -> Vec<Neighbor> {
        let mut heap: BinaryHeap<Neighbor> = BinaryHeap::with_capacity(k + 1);
        if k == 0 {
            return Vec::new();
        }
        match &self.tree {
            None => {
                for (i, row) in self.data.rows().enumerate() {
                    if Some(i) == exclude {
                        continue;
                    }
                    push_bounded(&mut heap, k, Neighbor { index: i, distance: self.spec.eval(query, row) });
                }
            }
            Some(tree) => tree.search(&tree.root, self, query, k, exclude, &mut heap),
        }
        heap.into_sorted_vec()
    }

    pub fn nearest(&self, query: &[f64], exclude: Option<usize>) -> Option<Neighbor> {
        self.knn(query, 1, exclude).into_iter().next()
    }
}

fn push_bounded(heap: &mut BinaryHeap<Neighbor>, k: usize, cand: Neighbor) {
    if heap.len() < k {
        heap.push(cand);
    } else if let Some(top) = heap.peek() {
        if cand < *top {
            heap.pop();
            heap.push(cand);
        }
    }
}

fn bbox(data: &Matrix, idx: &[usize]) -> (Vec<f64>, Vec<f64>) {
    let d = data.ncols();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for &i in idx {
        for (j, v) in data.row(i).iter().enumerate() {
            lo[j] = lo[j].min(*v);
            hi[j] = hi[j].max(*v);
        }
    }
    (lo, hi)
}

impl KdTree {
    fn build(data: &Matrix) -> KdTree {
        let mut order: Vec<usize> = (0..data.nrows()).collect();
        let n = order.len();
        let root = Self::build_node(data, &mut order, 0, n);
        KdTree { order, root }
    }

    fn build_node(data: &Matrix, order: &mut [usize], start: usize, end: usize) -> Node {
        if end - start <= LEAF_SIZE {
            return Node::Leaf { start, end };
        }
        let (lo, hi) = bbox(data, &order[start..end]);
        let axis = (0..data.ncols())
            .max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b])))
            .unwrap_or(0);
        if hi[axis] - lo[axis] <= 0.0 {
            return Node::Leaf { start, end };
        }
        let mid = start + (end - start) / 2;
        order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
            data.get(a, axis).total_cmp(&data.get(b, axis))
        });
        let left_box = bbox(data, &order[start..mid]);
        let right_box = bbox(data, &order[mid..end]);
        let left = Box::new(Self::build_node(data, order, start, mid));
        let right = Box::new(Self::build_node(data, order, mid, end));
        Node::Split {
            left,
            right,
            left_box,
            right_box,
        }
    }

    fn search(
        &self,
        node: &Node,
        index: &NeighborIndex<'_>,
        q: &[f64],
        k: usize,
        exclude: Option<usize>,
        heap: &mut BinaryHeap<Neighbor>,
    ) {
        match node {
            Node::Leaf { start, end } => {
                for &i in &self.order[*start..*end] {
                    if Some(i) == exclude {
                        continue;
                    }
                    let d = index.spec.eval(q, index.data.row(i));
                    push_bounded(heap, k, Neighbor { index: i, distance: d });
                }
            }
            Node::Split {
                left,
                right,
                left_box,
                right_box,
                ..
            } => {
                let bl = box_lower_bound(&index.spec, q, left_box);
                let br = box_lower_bound(&index.spec, q, right_box);
                let (first, fb, second, sb) = if bl <= br {
                    (left, bl, right, br)
                } else {
                    (right, br, left, bl)
                };
                for (child, bound) in [(first, fb), (second, sb)] {
                    // Equal bounds must still be explored so index tie-breaks match brute force.
                    if heap.len() < k || bound <= heap.peek().map_or(f64::INFINITY, |t| t.distance) {
                        self.search(child, index, q, k, exclude, heap);
                    }
                }
            }
        }
    }
}

fn box_lower_bound(spec: &DistanceSpec, q: &[f64], (lo, hi): &(Vec<f64>, Vec<f64>)) -> f64 {
    let gaps = q
        .iter()
        .zip(lo.iter().zip(hi))
        .map(|(&x, (&l, &h))| if x < l { l - x } else if x > h { x - h } else { 0.0 });
    let bound = match spec {
        DistanceSpec::Euclidean => gaps.map(|g| g * g).sum::<f64>().sqrt(),
        DistanceSpec::Manhattan => gaps.sum(),
        _ => gaps.fold(0.0, f64::max),
    };
    // Guard against rounding making the bound exceed a true distance.
    bound * (1.0 - 1e-12)
}

/// Distance from each row of `queries` to its nearest row of `data`.
pub fn nearest_distances(queries: &Matrix, data: &Matrix, spec: &DistanceSpec) -> Result<Vec<f64>> {
    queries.ensure_cols(data.ncols(), "nearest neighbor query")?;
    spec.validate(queries)?;
    let index = NeighborIndex::new(data, *spec, queries.nrows())?;
    Ok((0..queries.nrows())
        .into_par_iter()
        .map(|i| index.nearest(queries.row(i), None).map_or(f64::INFINITY, |n| n.distance))
        .collect())
}
