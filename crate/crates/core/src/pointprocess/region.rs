use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned closed box `[lo, hi]` in `R^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

/// Distance convention at the edge of the simulation window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Boundary {
    #[default]
    Free,
    /// Minimum-image displacement on the torus obtained by identifying
    /// opposite faces of the region.
    Periodic,
}

impl Region {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() {
            return Err(Error::InvalidRegion("dimension must be at least 1".into()));
        }
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch { expected: lo.len(), got: hi.len() });
        }
        for (i, (a, b)) in lo.iter().zip(&hi).enumerate() {
            if !a.is_finite() || !b.is_finite() || b - a <= 0.0 || !(b - a).is_finite() {
                return Err(Error::InvalidRegion(format!("axis {i}: [{a}, {b}] is degenerate")));
            }
        }
        Ok(Region { lo, hi })
    }

    /// `[-half_width, half_width]^dim`.
    pub fn cube(dim: usize, half_width: f64) -> Result<Self> {
        Region::new(vec![-half_width; dim], vec![half_width; dim])
    }

    /// `[lo, hi]^dim`.
    pub fn hypercube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Region::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn extent(&self, axis: usize) -> f64 {
        self.hi[axis] - self.lo[axis]
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim()).map(|i| self.extent(i)).product()
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(a, b)| 0.5 * (a + b)).collect()
    }

    /// Membership in the closed box.
    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (a, b))| *a <= *v && *v <= *b)
    }

    pub fn contains_origin(&self) -> bool {
        self.lo.iter().zip(&self.hi).all(|(a, b)| *a <= 0.0 && 0.0 <= *b)
    }

    /// Writes `a - b` into `out`, wrapped to the minimum image when periodic.
    pub fn displacement(&self, a: &[f64], b: &[f64], boundary: Boundary, out: &mut [f64]) {
        for i in 0..out.len() {
            let mut d = a[i] - b[i];
            if boundary == Boundary::Periodic {
                let period = self.extent(i);
                if d > 0.5 * period {
                    d -= period;
                } else if d < -0.5 * period {
                    d += period;
                }
            }
            out[i] = d;
        }
    }
}
