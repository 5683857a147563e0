use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pointprocess::{Boundary, CellGrid, PointCloud, Provenance, Region};
use crate::stream::RngStream;

use super::ConnectionSpec;

pub const DEFAULT_PAIR_BUDGET: u128 = 50_000_000;

/// How pairs are visited when drawing the edge field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SamplingMethod {
    /// Exact sweep while the pair count fits the budget, hierarchical otherwise.
    #[default]
    Auto,
    /// One Bernoulli draw per unordered pair in lexicographic order.
    Exact,
    /// Hierarchical cell-pair scheme with dominated candidates and thinning.
    Hierarchical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeSampling {
    pub boundary: Boundary,
    pub pair_budget: u128,
    pub method: SamplingMethod,
}

impl Default for EdgeSampling {
    fn default() -> Self {
        EdgeSampling {
            boundary: Boundary::Free,
            pair_budget: DEFAULT_PAIR_BUDGET,
            method: SamplingMethod::Auto,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeProvenance {
    pub cloud: Provenance,
    pub spec: ConnectionSpec,
    pub stream: RngStream,
}

/// Open edges of one realization as sorted pairs `(i, j)` with `i < j`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeList {
    pairs: Vec<(usize, usize)>,
    provenance: EdgeProvenance,
}

impl EdgeList {
    /// Normalizes, sorts and validates `pairs` against `vertex_count`.
    pub fn new(mut pairs: Vec<(usize, usize)>, vertex_count: usize, provenance: EdgeProvenance) -> Result<Self> {
        for p in pairs.iter_mut() {
            if p.0 == p.1 {
                return Err(Error::InvalidParameter(format!("self-loop at {}", p.0)));
            }
            if p.0 > p.1 {
                *p = (p.1, p.0);
            }
            if p.1 >= vertex_count {
                return Err(Error::VertexOutOfRange { vertex: p.1, count: vertex_count });
            }
        }
        pairs.sort_unstable();
        if pairs.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter("duplicate edge".into()));
        }
        Ok(EdgeList { pairs, provenance })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn provenance(&self) -> &EdgeProvenance {
        &self.provenance
    }
}

/// Draws the independent edge field: each unordered pair `{i, j}` is open
/// with probability `g(X_i - X_j)`.
pub fn sample_edges(
    cloud: &PointCloud,
    spec: &ConnectionSpec,
    stream: RngStream,
    options: &EdgeSampling,
) -> Result<EdgeList> {
    if spec.dim() != cloud.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), got: cloud.dim() });
    }
    let n = cloud.len() as u128;
    let pair_count = n * n.saturating_sub(1) / 2;
    let method = match options.method {
        SamplingMethod::Auto if pair_count <= options.pair_budget => SamplingMethod::Exact,
        SamplingMethod::Auto => SamplingMethod::Hierarchical,
        SamplingMethod::Exact if pair_count > options.pair_budget => {
            return Err(Error::PairBudgetExceeded { pairs: pair_count, budget: options.pair_budget });
        }
        m => m,
    };
    let pairs = match method {
        SamplingMethod::Exact => exact_sweep(cloud, spec, stream, options.boundary),
        _ => hierarchical(cloud, spec, stream, options.boundary),
    };
    let provenance = EdgeProvenance { cloud: cloud.provenance(), spec: *spec, stream };
    EdgeList::new(pairs, cloud.len(), provenance)
}

fn exact_sweep(cloud: &PointCloud, spec: &ConnectionSpec, stream: RngStream, boundary: Boundary) -> Vec<(usize, usize)> {
    let mut rng = stream.rng();
    let region = cloud.region();
    let mut z = vec![0.0; cloud.dim()];
    let mut pairs = Vec::new();
    for i in 0..cloud.len() {
        let xi = cloud.point(i);
        for j in i + 1..cloud.len() {
            region.displacement(xi, cloud.point(j), boundary, &mut z);
            if bernoulli(&mut rng, spec.eval(&z)) {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

fn bernoulli<R: Rng>(rng: &mut R, p: f64) -> bool {
    if p <= 0.0 {
        false
    } else if p >= 1.0 {
        true
    } else {
        rng.random::<f64>() < p
    }
}

/// Mean number of points per finest cell.
const POINTS_PER_CELL: f64 = 3.0;

/// Hierarchical scheme.
///
/// Every pair of points is assigned to exactly one cell pair: at the finest
/// level, pairs in neighbouring cells (Chebyshev index distance <= 1) get an
/// exact Bernoulli draw; at level `l`, pairs whose level-`l` cells are not
/// neighbours but whose parents are, are handled as a block. A block of
/// `n_a * n_b` pairs is dominated by `q = g(dmin)`, with `dmin` the smallest
/// distance between the two cells' point bounding boxes; candidates are
/// located by geometric skipping and kept with probability `g / q`.
fn hierarchical(cloud: &PointCloud, spec: &ConnectionSpec, stream: RngStream, boundary: Boundary) -> Vec<(usize, usize)> {
    let n = cloud.len();
    if n < 2 {
        return Vec::new();
    }
    let region = cloud.region();
    let d = cloud.dim();
    let cell = (POINTS_PER_CELL * region.volume() / n as f64).powf(1.0 / d as f64);
    let cell = cell.min((0..d).map(|i| region.extent(i)).fold(f64::INFINITY, f64::min));
    let mut grid = CellGrid::anchored(cloud, region.lo().to_vec(), cell).expect("valid cell size");
    let mut rng = stream.rng();
    let mut pairs = Vec::new();
    let mut z = vec![0.0; d];

    // finest level: neighbour cells exactly
    for (a, pa) in grid.occupied() {
        let ca = grid.coords_of(a);
        for_each_offset(d, -1, 1, |off| {
            let Some(cb) = shifted(&ca, off, grid.dims()) else { return };
            let b = grid.linear(&cb);
            if b < a {
                return;
            }
            let pb = grid.points_in(b);
            for (ia, &i) in pa.iter().enumerate() {
                let rest = if a == b { &pb[ia + 1..] } else { pb };
                for &j in rest {
                    region.displacement(cloud.point(i), cloud.point(j), boundary, &mut z);
                    if bernoulli(&mut rng, spec.eval(&z)) {
                        pairs.push((i.min(j), i.max(j)));
                    }
                }
            }
        });
    }

    while grid.dims().iter().any(|&m| m > 1) {
        let boxes = bounding_boxes(cloud, &grid);
        for (a, pa) in grid.occupied() {
            let ca = grid.coords_of(a);
            let parent: Vec<i64> = ca.iter().map(|&k| (k / 2) as i64).collect();
            // children of the parent's neighbours: 6 candidates per axis
            let base: Vec<i64> = parent.iter().map(|&p| 2 * (p - 1)).collect();
            for_each_offset(d, 0, 5, |off| {
                let mut cb = Vec::with_capacity(d);
                for i in 0..d {
                    let k = base[i] + off[i];
                    if k < 0 || k as usize >= grid.dims()[i] {
                        return;
                    }
                    cb.push(k as usize);
                }
                let b = grid.linear(&cb);
                if b <= a || ca.iter().zip(&cb).all(|(x, y)| x.abs_diff(*y) <= 1) {
                    return;
                }
                let pb = grid.points_in(b);
                if pb.is_empty() {
                    return;
                }
                let dmin = box_gap(region, &boxes[a], &boxes[b], boundary, spec);
                let q = spec.profile(dmin);
                if q <= 0.0 {
                    return;
                }
                let total = (pa.len() * pb.len()) as u64;
                let mut accept = |t: u64, rng: &mut rand_chacha::ChaCha8Rng| {
                    let i = pa[(t / pb.len() as u64) as usize];
                    let j = pb[(t % pb.len() as u64) as usize];
                    region.displacement(cloud.point(i), cloud.point(j), boundary, &mut z);
                    let p = spec.eval(&z);
                    if p >= q || rng.random::<f64>() * q < p {
                        pairs.push((i.min(j), i.max(j)));
                    }
                };
                if q >= 1.0 {
                    for t in 0..total {
                        accept(t, &mut rng);
                    }
                } else {
                    let log_miss = (-q).ln_1p();
                    let mut t: u64 = 0;
                    loop {
                        let u: f64 = 1.0 - rng.random::<f64>();
                        let skip = (u.ln() / log_miss).floor();
                        if skip >= (total - t) as f64 {
                            break;
                        }
                        t += skip as u64;
                        accept(t, &mut rng);
                        t += 1;
                        if t >= total {
                            break;
                        }
                    }
                }
            });
        }
        grid = grid.coarsen();
    }
    pairs
}

fn for_each_offset(d: usize, lo: i64, hi: i64, mut f: impl FnMut(&[i64])) {
    let mut off = vec![lo; d];
    loop {
        f(&off);
        let mut axis = 0;
        loop {
            if axis == d {
                return;
            }
            off[axis] += 1;
            if off[axis] <= hi {
                break;
            }
            off[axis] = lo;
            axis += 1;
        }
    }
}

fn shifted(c: &[usize], off: &[i64], dims: &[usize]) -> Option<Vec<usize>> {
    c.iter()
        .zip(off)
        .zip(dims)
        .map(|((&k, &o), &m)| {
            let v = k as i64 + o;
            (v >= 0 && (v as usize) < m).then_some(v as usize)
        })
        .collect()
}

/// Per-cell bounding box `(lo, hi)` of the contained points.
fn bounding_boxes(cloud: &PointCloud, grid: &CellGrid) -> Vec<(Vec<f64>, Vec<f64>)> {
    let d = cloud.dim();
    (0..grid.cell_count())
        .map(|c| {
            let mut lo = vec![f64::INFINITY; d];
            let mut hi = vec![f64::NEG_INFINITY; d];
            for &i in grid.points_in(c) {
                for (k, v) in cloud.point(i).iter().enumerate() {
                    lo[k] = lo[k].min(*v);
                    hi[k] = hi[k].max(*v);
                }
            }
            (lo, hi)
        })
        .collect()
}

/// Lower bound on the norm of `x - y` over `x` in box `a`, `y` in box `b`.
fn box_gap(
    region: &Region,
    a: &(Vec<f64>, Vec<f64>),
    b: &(Vec<f64>, Vec<f64>),
    boundary: Boundary,
    spec: &ConnectionSpec,
) -> f64 {
    let gaps: Vec<f64> = (0..a.0.len())
        .map(|i| {
            let gap = |shift: f64| (b.0[i] + shift - a.1[i]).max(a.0[i] - b.1[i] - shift).max(0.0);
            match boundary {
                Boundary::Free => gap(0.0),
                Boundary::Periodic => {
                    let p = region.extent(i);
                    gap(0.0).min(gap(p)).min(gap(-p))
                }
            }
        })
        .collect();
    spec.norm().of(&gaps)
}
