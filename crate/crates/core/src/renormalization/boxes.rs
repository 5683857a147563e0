use crate::connection::EdgeList;
use crate::error::{invalid, Error, Result};
use crate::graph::UnionFind;
use crate::pointprocess::PointCloud;

/// Partition into ε-boxes `2εk + [-ε, ε)^d`, `k ∈ Z^d`, covering the
/// cloud's region, with within-box clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxGrid {
    epsilon: f64,
    kmin: Vec<i64>,
    dims: Vec<usize>,
    complete: Vec<bool>,
    start: Vec<usize>,
    entries: Vec<usize>,
    point_box: Vec<usize>,
    /// Within-box cluster sizes per box, decreasing.
    cluster_sizes: Vec<Vec<usize>>,
    designated: Vec<bool>,
}

const SLACK: f64 = 1e-9;

fn box_coord(x: f64, epsilon: f64) -> i64 {
    ((x + epsilon) / (2.0 * epsilon)).floor() as i64
}

pub fn partition_boxes(cloud: &PointCloud, edges: &EdgeList, epsilon: f64) -> Result<BoxGrid> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return invalid(format!("epsilon must be positive, got {epsilon}"));
    }
    let region = cloud.region();
    let d = cloud.dim();
    if (0..d).any(|i| 2.0 * epsilon > region.extent(i)) {
        return Err(Error::InvalidRegion(format!("an {epsilon}-box does not fit inside the region")));
    }
    let mut kmin = Vec::with_capacity(d);
    let mut dims = Vec::with_capacity(d);
    for i in 0..d {
        let lo = ((region.lo()[i] + epsilon) / (2.0 * epsilon) + SLACK).floor() as i64;
        let hi = ((region.hi()[i] + epsilon) / (2.0 * epsilon) - SLACK).ceil() as i64 - 1;
        kmin.push(lo);
        dims.push((hi - lo + 1) as usize);
    }
    let count: usize = dims.iter().product();
    let mut grid = BoxGrid {
        epsilon,
        kmin,
        dims,
        complete: Vec::with_capacity(count),
        start: vec![0; count + 1],
        entries: vec![0; cloud.len()],
        point_box: Vec::with_capacity(cloud.len()),
        cluster_sizes: vec![Vec::new(); count],
        designated: vec![false; cloud.len()],
    };
    for b in 0..count {
        let k = grid.index_of(b);
        let complete = (0..d).all(|i| {
            let c = 2.0 * epsilon * k[i] as f64;
            c - epsilon >= region.lo()[i] - SLACK && c + epsilon <= region.hi()[i] + SLACK
        });
        grid.complete.push(complete);
    }
    for x in cloud.points() {
        let k: Vec<i64> = (0..d)
            .map(|i| box_coord(x[i], epsilon).clamp(grid.kmin[i], grid.kmin[i] + grid.dims[i] as i64 - 1))
            .collect();
        let b = grid.linear_of(&k).expect("clamped into range");
        grid.point_box.push(b);
        grid.start[b + 1] += 1;
    }
    for b in 0..count {
        grid.start[b + 1] += grid.start[b];
    }
    let mut fill = grid.start.clone();
    for (i, &b) in grid.point_box.iter().enumerate() {
        grid.entries[fill[b]] = i;
        fill[b] += 1;
    }

    let mut uf = UnionFind::new(cloud.len());
    for &(i, j) in edges.pairs() {
        if grid.point_box[i] == grid.point_box[j] {
            uf.union(i, j);
        }
    }
    let mut size = vec![0usize; cloud.len()];
    for b in 0..count {
        let pts = &grid.entries[grid.start[b]..grid.start[b + 1]];
        let mut roots = Vec::new();
        for &i in pts {
            let r = uf.find(i);
            if size[r] == 0 {
                roots.push(r);
            }
            size[r] += 1;
        }
        // roots are in order of their smallest point index
        let mut best: Option<usize> = None;
        for &r in &roots {
            if best.is_none_or(|q| size[r] > size[q]) {
                best = Some(r);
            }
        }
        if let Some(r) = best {
            for &i in pts {
                grid.designated[i] = uf.find(i) == r;
            }
        }
        let mut sizes: Vec<usize> = roots.iter().map(|&r| size[r]).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        grid.cluster_sizes[b] = sizes;
        for &r in &roots {
            size[r] = 0;
        }
    }
    Ok(grid)
}

impl BoxGrid {
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn box_count(&self) -> usize {
        self.complete.len()
    }

    /// Lattice index `k` of a box.
    pub fn index_of(&self, mut b: usize) -> Vec<i64> {
        let mut k = vec![0; self.dims.len()];
        for i in (0..self.dims.len()).rev() {
            k[i] = self.kmin[i] + (b % self.dims[i]) as i64;
            b /= self.dims[i];
        }
        k
    }

    pub fn linear_of(&self, k: &[i64]) -> Option<usize> {
        let mut b = 0;
        for i in 0..self.dims.len() {
            let off = k[i] - self.kmin[i];
            if off < 0 || off >= self.dims[i] as i64 {
                return None;
            }
            b = b * self.dims[i] + off as usize;
        }
        Some(b)
    }

    pub fn center(&self, b: usize) -> Vec<f64> {
        self.index_of(b).iter().map(|&k| 2.0 * self.epsilon * k as f64).collect()
    }

    /// Whether the whole box lies inside the region.
    pub fn is_complete(&self, b: usize) -> bool {
        self.complete[b]
    }

    pub fn points_in(&self, b: usize) -> &[usize] {
        &self.entries[self.start[b]..self.start[b + 1]]
    }

    pub fn box_of_point(&self, i: usize) -> usize {
        self.point_box[i]
    }

    pub fn cluster_sizes(&self, b: usize) -> &[usize] {
        &self.cluster_sizes[b]
    }

    pub fn largest_cluster(&self, b: usize) -> usize {
        self.cluster_sizes[b].first().copied().unwrap_or(0)
    }

    /// Whether point `i` belongs to its box's designated cluster (largest,
    /// ties to the smallest point index).
    pub fn is_designated(&self, i: usize) -> bool {
        self.designated[i]
    }
}

/// True iff the box's largest within-box cluster has at least `beta` points.
pub fn good_box(grid: &BoxGrid, b: usize, beta: usize) -> Result<bool> {
    if beta == 0 {
        return invalid("beta must be at least 1");
    }
    if b >= grid.box_count() {
        return Err(Error::VertexOutOfRange { vertex: b, count: grid.box_count() });
    }
    Ok(grid.largest_cluster(b) >= beta)
}
