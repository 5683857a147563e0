//! Globally adaptive Gauss–Kronrod quadrature in one and two dimensions.
//!
//! The 1-D rule is the 7-point Gauss / 15-point Kronrod pair; the 2-D rule
//! is its tensor product over rectangles. The cell with the largest
//! `|Kronrod - Gauss|` is bisected (1-D) or quartered (2-D) until the
//! summed error estimate meets the tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Nodes on `[-1, 1]` with Kronrod and Gauss weights (Gauss weight 0 for
/// Kronrod-only nodes).
fn rule() -> [(f64, f64, f64); 15] {
    let mut out = [(0.0, 0.0, 0.0); 15];
    for k in 0..7 {
        let wg = if k % 2 == 1 { WG[k / 2] } else { 0.0 };
        out[k] = (-XGK[k], WGK[k], wg);
        out[14 - k] = (XGK[k], WGK[k], wg);
    }
    out[7] = (0.0, WGK[7], WG[3]);
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_cells: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs: 1e-6, rel: 0.0, max_cells: 20_000 }
    }
}

impl Tolerance {
    pub fn absolute(abs: f64) -> Self {
        Tolerance { abs, ..Default::default() }
    }

    fn met(&self, value: f64, error: f64) -> bool {
        error <= self.abs.max(self.rel * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl Estimate {
    pub fn zero() -> Self {
        Estimate { value: 0.0, error: 0.0, evaluations: 0, converged: true }
    }

    /// Sum of independent pieces; errors add.
    pub fn combine(self, other: Estimate) -> Estimate {
        Estimate {
            value: self.value + other.value,
            error: self.error + other.error,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
        }
    }
}

struct Cell<const N: usize> {
    lo: [f64; N],
    hi: [f64; N],
    value: f64,
    error: f64,
}

impl<const N: usize> PartialEq for Cell<N> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<const N: usize> Eq for Cell<N> {}
impl<const N: usize> PartialOrd for Cell<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const N: usize> Ord for Cell<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn apply_1d(f: &mut impl FnMut(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let (mut k, mut g) = (0.0, 0.0);
    for (x, wk, wg) in rule() {
        let v = f(c + h * x);
        k += wk * v;
        g += wg * v;
    }
    (k * h, ((k - g) * h).abs())
}

fn apply_2d(f: &mut impl FnMut(f64, f64) -> f64, lo: [f64; 2], hi: [f64; 2]) -> (f64, f64) {
    let c = [0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])];
    let h = [0.5 * (hi[0] - lo[0]), 0.5 * (hi[1] - lo[1])];
    let nodes = rule();
    let (mut k, mut g) = (0.0, 0.0);
    for (x, wkx, wgx) in nodes {
        let px = c[0] + h[0] * x;
        for (y, wky, wgy) in nodes {
            let v = f(px, c[1] + h[1] * y);
            k += wkx * wky * v;
            g += wgx * wgy * v;
        }
    }
    let area = h[0] * h[1];
    (k * area, ((k - g) * area).abs())
}

fn adapt<const N: usize>(
    mut eval: impl FnMut([f64; N], [f64; N]) -> (f64, f64),
    lo: [f64; N],
    hi: [f64; N],
    tol: Tolerance,
    per_cell: usize,
) -> Estimate {
    let (value, error) = eval(lo, hi);
    let mut heap = BinaryHeap::new();
    heap.push(Cell { lo, hi, value, error });
    let (mut total, mut err) = (value, error);
    let mut cells = 1;
    let mut evaluations = per_cell;
    while !tol.met(total, err) && cells < tol.max_cells {
        let worst = heap.pop().expect("heap holds at least one cell");
        total -= worst.value;
        err -= worst.error;
        let mid: [f64; N] = std::array::from_fn(|i| 0.5 * (worst.lo[i] + worst.hi[i]));
        for corner in 0..(1usize << N) {
            let mut clo = worst.lo;
            let mut chi = worst.hi;
            for i in 0..N {
                if corner >> i & 1 == 0 {
                    chi[i] = mid[i];
                } else {
                    clo[i] = mid[i];
                }
            }
            let (v, e) = eval(clo, chi);
            evaluations += per_cell;
            total += v;
            err += e;
            heap.push(Cell { lo: clo, hi: chi, value: v, error: e });
        }
        cells += (1 << N) - 1;
    }
    // re-sum to shed accumulated rounding from the running totals
    let value: f64 = heap.iter().map(|c| c.value).sum();
    let error: f64 = heap.iter().map(|c| c.error).sum();
    Estimate { value, error, evaluations, converged: tol.met(value, error) }
}

/// `∫_lo^hi f(x) dx` over a finite interval.
pub fn integrate_1d(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: Tolerance) -> Estimate {
    if hi <= lo {
        return Estimate::zero();
    }
    adapt(|a: [f64; 1], b: [f64; 1]| apply_1d(&mut f, a[0], b[0]), [lo], [hi], tol, 15)
}

/// `∫_a^∞ f(x) dx` via `x = a + (1 - t) / t`, `t ∈ (0, 1]`.
pub fn integrate_to_infinity(mut f: impl FnMut(f64) -> f64, a: f64, tol: Tolerance) -> Estimate {
    integrate_1d(
        |t| {
            if t <= 0.0 {
                return 0.0;
            }
            let x = a + (1.0 - t) / t;
            f(x) / (t * t)
        },
        0.0,
        1.0,
        tol,
    )
}

/// `∫∫ f(x, y)` over the rectangle `[x0, x1] × [y0, y1]`.
pub fn integrate_2d(
    mut f: impl FnMut(f64, f64) -> f64,
    x: (f64, f64),
    y: (f64, f64),
    tol: Tolerance,
) -> Estimate {
    if x.1 <= x.0 || y.1 <= y.0 {
        return Estimate::zero();
    }
    adapt(|a: [f64; 2], b: [f64; 2]| apply_2d(&mut f, a, b), [x.0, y.0], [x.1, y.1], tol, 225)
}
