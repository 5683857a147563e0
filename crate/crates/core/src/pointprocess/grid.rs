use crate::error::{invalid, Result};

use super::PointCloud;

/// Uniform cell index over a point cloud.
///
/// Cells are half-open `[origin + k·s, origin + (k+1)·s)` per axis; a point
/// sitting exactly on the far face of the region goes to the last cell.
/// Points are bucketed by a counting sort, so each cell's members are a
/// contiguous slice in index order.
#[derive(Debug, Clone)]
pub struct CellGrid {
    origin: Vec<f64>,
    cell_size: f64,
    dims: Vec<usize>,
    /// Integer cell coordinates of every point, `dim` per point.
    point_cells: Vec<usize>,
    start: Vec<usize>,
    entries: Vec<usize>,
}

pub fn build_cell_grid(cloud: &PointCloud, cell_size: f64) -> Result<CellGrid> {
    CellGrid::anchored(cloud, cloud.region().lo().to_vec(), cell_size)
}

impl CellGrid {
    /// Grid whose cell `0` starts at `origin` (must not exceed the region's
    /// lower corner on any axis).
    pub fn anchored(cloud: &PointCloud, origin: Vec<f64>, cell_size: f64) -> Result<CellGrid> {
        if !(cell_size.is_finite() && cell_size > 0.0) {
            return invalid(format!("cell size must be positive, got {cell_size}"));
        }
        let region = cloud.region();
        let d = region.dim();
        if origin.len() != d || origin.iter().zip(region.lo()).any(|(o, lo)| o > lo) {
            return invalid("grid origin must lie at or below the region's lower corner");
        }
        let dims: Vec<usize> = (0..d)
            .map(|i| (((region.hi()[i] - origin[i]) / cell_size).ceil() as usize).max(1))
            .collect();
        let mut point_cells = Vec::with_capacity(cloud.len() * d);
        for p in cloud.points() {
            for i in 0..d {
                let k = ((p[i] - origin[i]) / cell_size).floor().max(0.0) as usize;
                point_cells.push(k.min(dims[i] - 1));
            }
        }
        Ok(CellGrid::from_parts(origin, cell_size, dims, point_cells))
    }

    fn from_parts(origin: Vec<f64>, cell_size: f64, dims: Vec<usize>, point_cells: Vec<usize>) -> CellGrid {
        let d = dims.len();
        let n_cells: usize = dims.iter().product();
        let n = point_cells.len() / d;
        let linear: Vec<usize> =
            point_cells.chunks_exact(d).map(|c| linear_index(&dims, c)).collect();
        let mut start = vec![0usize; n_cells + 1];
        for &c in &linear {
            start[c + 1] += 1;
        }
        for c in 0..n_cells {
            start[c + 1] += start[c];
        }
        let mut fill = start.clone();
        let mut entries = vec![0usize; n];
        for (i, &c) in linear.iter().enumerate() {
            entries[fill[c]] = i;
            fill[c] += 1;
        }
        CellGrid { origin, cell_size, dims, point_cells, start, entries }
    }

    /// Grid with cells twice as wide whose cell `k` is the union of the
    /// children `2k` and `2k+1` on every axis. Parent-child relations are
    /// exact integer arithmetic.
    pub fn coarsen(&self) -> CellGrid {
        let dims = self.dims.iter().map(|&m| m.div_ceil(2)).collect();
        let point_cells = self.point_cells.iter().map(|&k| k / 2).collect();
        CellGrid::from_parts(self.origin.clone(), 2.0 * self.cell_size, dims, point_cells)
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn cell_count(&self) -> usize {
        self.start.len() - 1
    }

    pub fn point_count(&self) -> usize {
        self.entries.len()
    }

    /// Cell containing coordinate `x`, or `None` outside the grid.
    pub fn cell_of(&self, x: &[f64]) -> Option<usize> {
        let mut coords = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let t = (x[i] - self.origin[i]) / self.cell_size;
            if !(t >= 0.0) {
                return None;
            }
            let k = t.floor() as usize;
            let far = self.origin[i] + self.dims[i] as f64 * self.cell_size;
            if k >= self.dims[i] && x[i] > far {
                return None;
            }
            coords.push(k.min(self.dims[i] - 1));
        }
        Some(linear_index(&self.dims, &coords))
    }

    /// Integer coordinates of the cell holding point `i`.
    pub fn point_cell(&self, i: usize) -> &[usize] {
        let d = self.dim();
        &self.point_cells[i * d..(i + 1) * d]
    }

    pub fn linear(&self, coords: &[usize]) -> usize {
        linear_index(&self.dims, coords)
    }

    pub fn coords_of(&self, mut cell: usize) -> Vec<usize> {
        let mut out = vec![0; self.dim()];
        for i in (0..self.dim()).rev() {
            out[i] = cell % self.dims[i];
            cell /= self.dims[i];
        }
        out
    }

    pub fn points_in(&self, cell: usize) -> &[usize] {
        &self.entries[self.start[cell]..self.start[cell + 1]]
    }

    /// Non-empty cells in linear order.
    pub fn occupied(&self) -> impl Iterator<Item = (usize, &[usize])> + '_ {
        (0..self.cell_count()).filter_map(move |c| {
            let pts = self.points_in(c);
            (!pts.is_empty()).then_some((c, pts))
        })
    }
}

fn linear_index(dims: &[usize], coords: &[usize]) -> usize {
    coords.iter().zip(dims).fold(0, |acc, (&k, &m)| acc * m + k)
}
