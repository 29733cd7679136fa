//! Quadrature over ℝ^N for integrands built from one, two or three radial
//! centers.
//!
//! * [`radial_integral`]: 1-D adaptive Gauss–Kronrod with a power-law tail.
//! * [`AxisRule`]: adaptive 2-D rule on the meridian half-plane of an
//!   axisymmetric configuration, reusable across integrands.
//! * [`monte_carlo`]: importance-sampled 3-D fallback for configurations
//!   without a symmetry axis.

mod axisym;
mod centers;
pub mod gk;
pub mod monte_carlo;
mod radial;

pub use axisym::{AxisNode, AxisPoint, AxisRule, RuleStats};
pub use centers::{three_center_integral, two_center_integral, CenterIntegral};
pub use radial::{radial_integral, radial_integral_with, RadialRule, sobolev_constant, sobolev_formula, sobolev_rayleigh_quotient};

/// Value with an error estimate.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub fn new(value: f64, error: f64) -> Self {
        Self { value, error }
    }

    pub fn relative_error(&self) -> f64 {
        if self.value == 0.0 {
            if self.error == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.error / crate::math::abs(self.value)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum QuadratureMethod {
    /// Reduce to the meridian half-plane around the axis through the centers.
    #[default]
    AxisymmetricProduct,
    /// Importance-sampled Monte Carlo in the full space.
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct QuadratureConfig {
    /// Radius of the inner disc of the 2-D rule, measured from the middle of
    /// the centers. `None` picks four times the span of the centers (at least 16).
    /// Beyond it the rule switches to the inversion `r = L / s`.
    pub box_radius: Option<f64>,
    /// Target relative error.
    pub tol: f64,
    /// Absolute error floor, for integrals that vanish.
    pub abs_tol: f64,
    /// Cell budget of the adaptive 2-D rule.
    pub max_cells: usize,
    pub method: QuadratureMethod,
    pub mc_samples: u64,
    pub seed: u64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            box_radius: None,
            tol: 1e-8,
            abs_tol: 1e-14,
            max_cells: 40_000,
            method: QuadratureMethod::AxisymmetricProduct,
            mc_samples: 1_000_000,
            seed: 0x5eed_2017,
        }
    }
}
