//! Homogeneous Poisson point processes on finite boxes.

mod grid;
mod region;

pub use grid::{build_cell_grid, CellGrid};
pub use region::{Boundary, Region};

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::stream::RngStream;

/// Where a cloud came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub stream_id: u64,
    pub rho: f64,
}

/// Points of one realization, stored flat (`dim` coordinates per point).
///
/// When `palm_origin` is set, point 0 is exactly the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    region: Region,
    coords: Vec<f64>,
    palm_origin: bool,
    provenance: Provenance,
}

impl PointCloud {
    /// Builds a cloud from explicit coordinates, checking that every point
    /// lies in the closed region and that a Palm origin really is at 0.
    pub fn from_coords(
        region: Region,
        coords: Vec<f64>,
        palm_origin: bool,
        provenance: Provenance,
    ) -> Result<Self> {
        let d = region.dim();
        if coords.len() % d != 0 {
            return Err(Error::DimensionMismatch { expected: d, got: coords.len() % d });
        }
        if let Some(bad) = coords.chunks_exact(d).position(|p| !region.contains(p)) {
            return Err(Error::InvalidParameter(format!("point {bad} lies outside the region")));
        }
        if palm_origin && (coords.len() < d || coords[..d].iter().any(|v| *v != 0.0)) {
            return invalid("palm cloud must start with the origin");
        }
        Ok(PointCloud { region, coords, palm_origin, provenance })
    }

    pub fn from_points(region: Region, points: &[Vec<f64>]) -> Result<Self> {
        let d = region.dim();
        if let Some(p) = points.iter().find(|p| p.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: p.len() });
        }
        let coords = points.iter().flatten().copied().collect();
        let provenance = Provenance { seed: 0, stream_id: 0, rho: 0.0 };
        PointCloud::from_coords(region, coords, false, provenance)
    }

    pub fn dim(&self) -> usize {
        self.region.dim()
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        let d = self.dim();
        &self.coords[i * d..(i + 1) * d]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim())
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn palm_origin(&self) -> bool {
        self.palm_origin
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Copy with points in lexicographic coordinate order. A Palm origin
    /// stays at index 0.
    pub fn sorted_lexicographic(&self) -> PointCloud {
        let d = self.dim();
        let skip = usize::from(self.palm_origin);
        let mut idx: Vec<usize> = (skip..self.len()).collect();
        idx.sort_by(|&a, &b| {
            self.point(a)
                .iter()
                .zip(self.point(b))
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let mut coords = Vec::with_capacity(self.coords.len());
        coords.extend_from_slice(&self.coords[..skip * d]);
        for i in idx {
            coords.extend_from_slice(self.point(i));
        }
        PointCloud { coords, ..self.clone() }
    }
}

/// Homogeneous Poisson process of intensity `rho` restricted to `region`:
/// a Poisson(`rho`·volume) count, then i.i.d. uniform positions.
pub fn sample_poisson(region: &Region, rho: f64, stream: RngStream) -> Result<PointCloud> {
    if !rho.is_finite() || rho <= 0.0 {
        return invalid(format!("intensity must be finite and positive, got {rho}"));
    }
    let mean = rho * region.volume();
    if !mean.is_finite() {
        return invalid("expected point count overflows");
    }
    let mut rng = stream.rng();
    let count = Poisson::new(mean)
        .map_err(|e| Error::InvalidParameter(format!("poisson mean {mean}: {e}")))?
        .sample(&mut rng) as usize;
    let d = region.dim();
    let mut coords = Vec::with_capacity(count * d);
    for _ in 0..count {
        for axis in 0..d {
            let u: f64 = rng.random();
            let x = region.lo()[axis] + u * region.extent(axis);
            coords.push(x.min(region.hi()[axis]));
        }
    }
    Ok(PointCloud {
        region: region.clone(),
        coords,
        palm_origin: false,
        provenance: Provenance { seed: stream.seed, stream_id: stream.stream_id, rho },
    })
}

/// Prepends the origin as point 0 (the "point at 0" Palm convention).
pub fn palm_condition(cloud: &PointCloud) -> Result<PointCloud> {
    if cloud.palm_origin {
        return Err(Error::AlreadyPalm);
    }
    if !cloud.region.contains_origin() {
        return Err(Error::OriginOutsideRegion);
    }
    let mut coords = vec![0.0; cloud.dim()];
    coords.extend_from_slice(&cloud.coords);
    Ok(PointCloud { coords, palm_origin: true, ..cloud.clone() })
}
