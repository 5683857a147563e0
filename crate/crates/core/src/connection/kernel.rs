use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Norm {
    #[default]
    One,
    Two,
}

impl Norm {
    pub fn of(self, x: &[f64]) -> f64 {
        match self {
            Norm::One => x.iter().map(|v| v.abs()).sum(),
            Norm::Two => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Norm::One => "one",
            Norm::Two => "two",
        }
    }

    /// Volume of the unit ball of this norm in `R^dim`.
    pub fn unit_ball_volume(self, dim: usize) -> f64 {
        let d = dim as f64;
        match self {
            Norm::One => (0..dim).fold(1.0, |acc, k| acc * 2.0 / (k as f64 + 1.0)),
            Norm::Two => std::f64::consts::PI.powf(0.5 * d) / gamma_half_integer(dim + 2),
        }
    }
}

/// Γ(m/2) for a positive integer `m`.
fn gamma_half_integer(m: usize) -> f64 {
    if m % 2 == 0 {
        (1..m / 2).fold(1.0, |acc, k| acc * k as f64)
    } else {
        let mut acc = std::f64::consts::PI.sqrt();
        let mut x = 0.5;
        while x < 0.5 * m as f64 - 0.25 {
            acc *= x;
            x += 1.0;
        }
        acc
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Connection probability as a function of the norm `r = |x|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Kernel {
    /// `1 - exp(-r^-alpha)`.
    PolynomialTail { alpha: f64 },
    /// `(1 - exp(-r^-alpha)) 1{r <= radius}`.
    Truncated { alpha: f64, radius: f64 },
    /// `1{r <= radius}` (Poisson blob model).
    Blob { radius: f64 },
}

impl Kernel {
    pub fn name(&self) -> &'static str {
        match self {
            Kernel::PolynomialTail { .. } => "polynomial_tail",
            Kernel::Truncated { .. } => "truncated",
            Kernel::Blob { .. } => "blob",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConnectionSpec {
    dim: usize,
    kernel: Kernel,
    norm: Norm,
}

impl ConnectionSpec {
    pub fn new(dim: usize, kernel: Kernel, norm: Norm) -> Result<Self> {
        if dim == 0 {
            return invalid("dimension must be at least 1");
        }
        let check_alpha = |alpha: f64| {
            if alpha.is_finite() && alpha > dim as f64 {
                Ok(())
            } else {
                invalid(format!("alpha must exceed the dimension {dim}, got {alpha}"))
            }
        };
        let check_radius = |name: &str, r: f64| {
            if r.is_finite() && r > 0.0 {
                Ok(())
            } else {
                invalid(format!("{name} must be positive, got {r}"))
            }
        };
        match kernel {
            Kernel::PolynomialTail { alpha } => check_alpha(alpha)?,
            Kernel::Truncated { alpha, radius } => {
                check_alpha(alpha)?;
                check_radius("truncation radius M", radius)?;
            }
            Kernel::Blob { radius } => check_radius("blob radius R", radius)?,
        }
        Ok(ConnectionSpec { dim, kernel, norm })
    }

    pub fn polynomial_tail(dim: usize, alpha: f64) -> Result<Self> {
        ConnectionSpec::new(dim, Kernel::PolynomialTail { alpha }, Norm::One)
    }

    pub fn truncated(dim: usize, alpha: f64, radius: f64) -> Result<Self> {
        ConnectionSpec::new(dim, Kernel::Truncated { alpha, radius }, Norm::One)
    }

    pub fn blob(dim: usize, radius: f64) -> Result<Self> {
        ConnectionSpec::new(dim, Kernel::Blob { radius }, Norm::One)
    }

    pub fn with_norm(mut self, norm: Norm) -> Self {
        self.norm = norm;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kernel(&self) -> Kernel {
        self.kernel
    }

    pub fn norm(&self) -> Norm {
        self.norm
    }

    pub fn alpha(&self) -> Option<f64> {
        match self.kernel {
            Kernel::PolynomialTail { alpha } | Kernel::Truncated { alpha, .. } => Some(alpha),
            Kernel::Blob { .. } => None,
        }
    }

    /// Radius beyond which the kernel vanishes, if compactly supported.
    pub fn support_radius(&self) -> Option<f64> {
        match self.kernel {
            Kernel::PolynomialTail { .. } => None,
            Kernel::Truncated { radius, .. } | Kernel::Blob { radius } => Some(radius),
        }
    }

    /// Kernel value at norm `r`. Non-increasing in `r`, equal to 1 at 0.
    pub fn profile(&self, r: f64) -> f64 {
        let tail = |alpha: f64| {
            if r == 0.0 {
                1.0
            } else {
                -(-r.powf(-alpha)).exp_m1()
            }
        };
        match self.kernel {
            Kernel::PolynomialTail { alpha } => tail(alpha),
            Kernel::Truncated { alpha, radius } => {
                if r <= radius {
                    tail(alpha)
                } else {
                    0.0
                }
            }
            Kernel::Blob { radius } => {
                if r <= radius {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Connection probability `g(x)` for a displacement `x`.
    pub fn eval(&self, displacement: &[f64]) -> f64 {
        debug_assert_eq!(displacement.len(), self.dim);
        self.profile(self.norm.of(displacement))
    }
}

/// Free-function form of [`ConnectionSpec::eval`].
pub fn eval_connection(spec: &ConnectionSpec, displacement: &[f64]) -> f64 {
    spec.eval(displacement)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn unit_distance_value() {
        let spec = ConnectionSpec::polynomial_tail(2, 4.0).unwrap();
        let expected = 1.0 - (-1.0f64).exp();
        assert!((spec.eval(&[1.0, 0.0]) - expected).abs() < 1e-12);
        assert!((spec.eval(&[0.5, -0.5]) - expected).abs() < 1e-12);
        assert!((spec.eval(&[1.0, 0.0]) - 0.6321206).abs() < 1e-7);
    }

    #[test]
    fn origin_is_one() {
        for spec in [
            ConnectionSpec::polynomial_tail(2, 4.0).unwrap(),
            ConnectionSpec::truncated(2, 4.0, 3.0).unwrap(),
            ConnectionSpec::blob(2, 1.0).unwrap(),
        ] {
            assert_eq!(spec.eval(&[0.0, 0.0]), 1.0);
        }
    }

    #[test]
    fn blob_indicator() {
        let spec = ConnectionSpec::blob(2, 1.0).unwrap();
        assert_eq!(spec.eval(&[2.0, 0.0]), 0.0);
        assert_eq!(spec.eval(&[0.5, 0.5]), 1.0);
        assert_eq!(spec.with_norm(Norm::Two).eval(&[0.6, 0.6]), 1.0);
        assert_eq!(spec.eval(&[0.6, 0.6]), 0.0);
    }

    #[test]
    fn truncation_cuts_tail() {
        let spec = ConnectionSpec::truncated(2, 4.0, 2.0).unwrap();
        assert_eq!(spec.eval(&[2.5, 0.0]), 0.0);
        assert!((spec.eval(&[1.0, 0.0]) - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_integrable_alpha() {
        assert!(ConnectionSpec::polynomial_tail(2, 2.0).is_err());
        assert!(ConnectionSpec::polynomial_tail(3, 2.5).is_err());
        assert!(ConnectionSpec::truncated(2, 1.0, 1.0).is_err());
        assert!(ConnectionSpec::blob(2, 0.0).is_err());
        assert!(ConnectionSpec::polynomial_tail(0, 4.0).is_err());
    }

    #[test]
    fn ball_volumes() {
        assert!((Norm::One.unit_ball_volume(2) - 2.0).abs() < 1e-15);
        assert!((Norm::One.unit_ball_volume(3) - 4.0 / 3.0).abs() < 1e-15);
        assert!((Norm::Two.unit_ball_volume(2) - std::f64::consts::PI).abs() < 1e-14);
        assert!((Norm::Two.unit_ball_volume(3) - 4.0 / 3.0 * std::f64::consts::PI).abs() < 1e-14);
        assert!((Norm::Two.unit_ball_volume(1) - 2.0).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn symmetric_and_in_range(x in -20.0f64..20.0, y in -20.0f64..20.0, alpha in 2.01f64..8.0) {
            for spec in [
                ConnectionSpec::polynomial_tail(2, alpha).unwrap(),
                ConnectionSpec::polynomial_tail(2, alpha).unwrap().with_norm(Norm::Two),
                ConnectionSpec::truncated(2, alpha, 3.0).unwrap(),
                ConnectionSpec::blob(2, 2.0).unwrap(),
            ] {
                let v = spec.eval(&[x, y]);
                prop_assert!((0.0..=1.0).contains(&v));
                prop_assert_eq!(v, spec.eval(&[-x, -y]));
            }
        }

        #[test]
        fn non_increasing_along_rays(theta in 0.0f64..6.3, r in 0.0f64..10.0, dr in 0.0f64..5.0) {
            let spec = ConnectionSpec::polynomial_tail(2, 3.5).unwrap();
            let blob = ConnectionSpec::blob(2, 4.0).unwrap();
            let (c, s) = (theta.cos(), theta.sin());
            let near = [r * c, r * s];
            let far = [(r + dr) * c, (r + dr) * s];
            prop_assert!(spec.eval(&far) <= spec.eval(&near));
            prop_assert!(blob.eval(&far) <= blob.eval(&near));
        }
    }
}
