//! Integrals of the connection kernel.
//!
//! A box-by-box double integral `∫_Y ∫_X g(x - y) dx dy` equals
//! `∫ g(z) w(z) dz` with `w(z) = |Y ∩ (X - z)|`, a product of 1-D interval
//! overlaps. The remaining 2-D integral is taken quadrant by quadrant in
//! norm-polar coordinates `(s, u)` with `s = |z|`, where every kernel is a
//! function of `s` alone and support cut-offs become straight breakpoints.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::pointprocess::Region;
use crate::quadrature::{integrate_1d, integrate_2d, integrate_to_infinity, Estimate, Tolerance};

use super::{ConnectionSpec, Norm};

/// Integral values at truncations `T, 2T, 4T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationReport {
    pub truncations: Vec<f64>,
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    /// `values[k+1] - values[k]`.
    pub differences: Vec<f64>,
}

impl TruncationReport {
    /// Ratios `differences[k] / differences[k+1]`.
    pub fn shrink_factors(&self) -> Vec<f64> {
        self.differences.windows(2).map(|w| w[0] / w[1]).collect()
    }
}

fn overlap(a_lo: f64, a_hi: f64, b_lo: f64, b_hi: f64) -> f64 {
    (a_hi.min(b_hi) - a_lo.max(b_lo)).max(0.0)
}

/// `|inner ∩ (outer - z)|` in two dimensions.
fn box_overlap(inner: &Region, outer: &Region, z: [f64; 2]) -> f64 {
    (0..2)
        .map(|i| overlap(inner.lo()[i], inner.hi()[i], outer.lo()[i] - z[i], outer.hi()[i] - z[i]))
        .product()
}

/// Point of norm `s` at angular parameter `u ∈ [0, 1]` in the quadrant
/// with signs `sign`, plus the Jacobian of `(s, u) ↦ z`.
fn polar(norm: Norm, sign: [f64; 2], s: f64, u: f64) -> ([f64; 2], f64) {
    match norm {
        Norm::One => ([sign[0] * s * u, sign[1] * s * (1.0 - u)], s),
        Norm::Two => {
            let t = 0.5 * std::f64::consts::PI * u;
            ([sign[0] * s * t.cos(), sign[1] * s * t.sin()], 0.5 * std::f64::consts::PI * s)
        }
    }
}

/// `∫ g(z) weight(z) dz` over `R^2`, where `weight` vanishes outside the
/// axis box `[zlo, zhi]`.
fn integrate_weighted(
    spec: &ConnectionSpec,
    zlo: [f64; 2],
    zhi: [f64; 2],
    weight: impl Fn([f64; 2]) -> f64,
    tol: Tolerance,
) -> Estimate {
    let norm = spec.norm();
    let quadrants = [[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]];
    let piece_tol = Tolerance { abs: tol.abs / 4.0, ..tol };
    let mut total = Estimate::zero();
    for sign in quadrants {
        // range of |z_i| inside this quadrant
        let mut near = [0.0; 2];
        let mut far = [0.0; 2];
        let mut empty = false;
        for i in 0..2 {
            let (a, b) = if sign[i] > 0.0 { (zlo[i], zhi[i]) } else { (-zhi[i], -zlo[i]) };
            if b <= 0.0 {
                empty = true;
            }
            near[i] = a.max(0.0);
            far[i] = b.max(0.0);
        }
        if empty {
            continue;
        }
        let s_lo = norm.of(&near);
        let mut s_hi = norm.of(&far);
        if let Some(r) = spec.support_radius() {
            s_hi = s_hi.min(r);
        }
        if s_hi <= s_lo {
            continue;
        }
        let est = integrate_2d(
            |s, u| {
                let (z, jac) = polar(norm, sign, s, u);
                let w = weight(z);
                if w == 0.0 {
                    0.0
                } else {
                    spec.profile(s) * w * jac
                }
            },
            (s_lo, s_hi),
            (0.0, 1.0),
            piece_tol,
        );
        total = total.combine(est);
    }
    total
}

fn check_planar(spec: &ConnectionSpec) -> Result<()> {
    if spec.dim() != 2 {
        return invalid(format!("box integrals are planar, got dimension {}", spec.dim()));
    }
    Ok(())
}

fn converged(est: Estimate, tol: Tolerance) -> Result<Estimate> {
    if est.converged {
        Ok(est)
    } else {
        Err(Error::QuadratureNotConverged { estimate: est.value, error: est.error, tol: tol.abs })
    }
}

/// `∫_{y ∈ inner} ∫_{x ∈ outer} g(x - y) dx dy` for two planar boxes.
pub fn integrate_pair(spec: &ConnectionSpec, inner: &Region, outer: &Region, tol: Tolerance) -> Result<Estimate> {
    check_planar(spec)?;
    if inner.dim() != 2 || outer.dim() != 2 {
        return invalid("regions must be planar");
    }
    let zlo = [outer.lo()[0] - inner.hi()[0], outer.lo()[1] - inner.hi()[1]];
    let zhi = [outer.hi()[0] - inner.lo()[0], outer.hi()[1] - inner.lo()[1]];
    converged(integrate_weighted(spec, zlo, zhi, |z| box_overlap(inner, outer, z), tol), tol)
}

/// `∫_A ∫_{B_T \ A} g(x - y) dx dy`, with `B_T` the box of half-width `T`
/// around the center of `A`, at `T`, `2T` and `4T`.
pub fn integrate_connection(
    spec: &ConnectionSpec,
    region_a: &Region,
    truncation: f64,
    tol: Tolerance,
) -> Result<TruncationReport> {
    check_planar(spec)?;
    if region_a.dim() != 2 {
        return invalid("region must be planar");
    }
    let diameter = spec.norm().of(&[region_a.extent(0), region_a.extent(1)]);
    if !(truncation >= 2.0 * diameter) {
        return invalid(format!("truncation {truncation} must be at least twice the diameter {diameter}"));
    }
    let center = region_a.center();
    let levels = [truncation, 2.0 * truncation, 4.0 * truncation];
    let mut values = Vec::new();
    let mut errors = Vec::new();
    for t in levels {
        let outer = Region::new(vec![center[0] - t, center[1] - t], vec![center[0] + t, center[1] + t])?;
        let zlo = [outer.lo()[0] - region_a.hi()[0], outer.lo()[1] - region_a.hi()[1]];
        let zhi = [outer.hi()[0] - region_a.lo()[0], outer.hi()[1] - region_a.lo()[1]];
        let weight = |z| box_overlap(region_a, &outer, z) - box_overlap(region_a, region_a, z);
        let est = converged(integrate_weighted(spec, zlo, zhi, weight, tol), tol)?;
        values.push(est.value);
        errors.push(est.error);
    }
    let differences = values.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(TruncationReport { truncations: levels.to_vec(), values, errors, differences })
}

/// `∫_{[gap, T]^2} ∫_{[-T, -gap]^2} g(x - y) dx dy` (opposite quadrants) at
/// `T`, `2T` and `4T`.
pub fn integrate_opposite_quadrants(
    spec: &ConnectionSpec,
    gap: f64,
    truncation: f64,
    tol: Tolerance,
) -> Result<TruncationReport> {
    check_planar(spec)?;
    if !(gap > 0.0 && truncation > gap) {
        return invalid("need 0 < gap < truncation");
    }
    let levels = [truncation, 2.0 * truncation, 4.0 * truncation];
    let mut values = Vec::new();
    let mut errors = Vec::new();
    for t in levels {
        let first = Region::hypercube(2, gap, t)?;
        let third = Region::hypercube(2, -t, -gap)?;
        let est = integrate_pair(spec, &first, &third, tol)?;
        values.push(est.value);
        errors.push(est.error);
    }
    let differences = values.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(TruncationReport { truncations: levels.to_vec(), values, errors, differences })
}

/// `∫_{R^d} g(x) dx`, computed radially: `∫_0^∞ g(s) d V_d s^{d-1} ds`.
pub fn integrate_kernel(spec: &ConnectionSpec, tol: Tolerance) -> Result<Estimate> {
    let d = spec.dim();
    let surface = d as f64 * spec.norm().unit_ball_volume(d);
    let f = |s: f64| spec.profile(s) * surface * s.powi(d as i32 - 1);
    let half = Tolerance { abs: tol.abs / 2.0, ..tol };
    let est = match spec.support_radius() {
        Some(r) => integrate_1d(f, 0.0, r, tol),
        None => integrate_1d(f, 0.0, 1.0, half).combine(integrate_to_infinity(f, 1.0, half)),
    };
    converged(est, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreePrediction {
    pub value: f64,
    pub error: f64,
}

/// Mean degree of the Palm origin, `rho · ∫ g`.
pub fn mean_degree_prediction(spec: &ConnectionSpec, rho: f64, tol: Tolerance) -> Result<DegreePrediction> {
    if !(rho.is_finite() && rho >= 0.0) {
        return invalid(format!("intensity must be finite and non-negative, got {rho}"));
    }
    if rho == 0.0 {
        return Ok(DegreePrediction { value: 0.0, error: 0.0 });
    }
    let est = integrate_kernel(spec, Tolerance { abs: tol.abs / rho, ..tol })?;
    Ok(DegreePrediction { value: rho * est.value, error: rho * est.error })
}
