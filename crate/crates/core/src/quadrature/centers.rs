//! Integrals of kernels that depend only on distances to two or three centers.

use super::axisym::{AxisPoint, AxisRule};
use super::monte_carlo::{self, McOptions};
use super::{radial_integral, QuadratureConfig, QuadratureMethod};
use crate::error::{Error, Result};
use crate::geometry::{distance, Axis};
use crate::math::{abs, hypot};

/// Radius of the 1-D rule used when all centers coincide.
const RADIAL_CUTOFF: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CenterIntegral {
    pub value: f64,
    pub error: f64,
    pub method: QuadratureMethod,
    /// Requested tolerance not reached; `error` is what was achieved.
    pub flagged: bool,
    /// Seed used, for Monte Carlo results.
    pub seed: Option<u64>,
}

impl CenterIntegral {
    fn deterministic(value: f64, error: f64, flagged: bool) -> Self {
        Self { value, error, method: QuadratureMethod::AxisymmetricProduct, flagged, seed: None }
    }
}

fn check_dims(points: &[&[f64]]) -> Result<usize> {
    let n = points[0].len();
    if n < 3 {
        return Err(Error::InvalidParameter { name: "N", value: n as f64, reason: "dimension must be at least 3" });
    }
    if points.iter().any(|p| p.len() != n) {
        return Err(Error::InvalidParameter { name: "centers", value: n as f64, reason: "centers differ in dimension" });
    }
    Ok(n)
}

fn on_axis<F>(axis: &Axis, points: &[&[f64]], n: usize, cfg: &QuadratureConfig, mut f: F) -> Result<CenterIntegral>
where
    F: FnMut(f64, f64) -> f64,
{
    let axis_points: alloc::vec::Vec<AxisPoint> =
        points.iter().map(|p| AxisPoint::new(axis.coordinate(p), 1.0)).collect();
    match AxisRule::build(&axis_points, n, 1, cfg, |z, rho, out| out[0] = f(z, rho)) {
        Ok((_, stats)) => Ok(CenterIntegral::deterministic(stats.values[0], stats.errors[0], false)),
        Err(Error::ToleranceNotMet { value, error, .. }) => Ok(CenterIntegral::deterministic(value, error, true)),
        Err(e) => Err(e),
    }
}

fn by_monte_carlo<F>(points: &[&[f64]], cfg: &QuadratureConfig, f: F) -> Result<CenterIntegral>
where
    F: FnMut(&[f64]) -> f64,
{
    let est = monte_carlo::integrate(f, points, McOptions { samples: cfg.mc_samples, seed: cfg.seed, scale: 1.0 })?;
    let flagged = est.error > cfg.tol * abs(est.value).max(cfg.abs_tol);
    Ok(CenterIntegral {
        value: est.value,
        error: est.error,
        method: QuadratureMethod::MonteCarlo,
        flagged,
        seed: Some(cfg.seed),
    })
}

/// `∫ kernel(|x-P₁|, |x-P₂|) dx` over ℝ^N.
///
/// Coincident centers reduce to a 1-D radial integral; otherwise the
/// integral is taken on the meridian half-plane of the `P₁P₂` axis, or by
/// Monte Carlo when `cfg.method` asks for it. A tolerance miss is reported
/// through [`CenterIntegral::flagged`].
pub fn two_center_integral<K>(kernel: K, p1: &[f64], p2: &[f64], cfg: &QuadratureConfig) -> Result<CenterIntegral>
where
    K: Fn(f64, f64) -> f64,
{
    let n = check_dims(&[p1, p2])?;
    if cfg.method == QuadratureMethod::MonteCarlo {
        return by_monte_carlo(&[p1, p2], cfg, |x| kernel(distance(x, p1), distance(x, p2)));
    }
    if distance(p1, p2) == 0.0 {
        let est = radial_integral(|r| kernel(r, r), RADIAL_CUTOFF, n)?;
        return Ok(CenterIntegral::deterministic(est.value, est.error, false));
    }
    let axis = Axis::through(&[p1, p2]).ok_or(Error::InvalidParameter {
        name: "centers",
        value: distance(p1, p2),
        reason: "could not build an axis",
    })?;
    let z1 = axis.coordinate(p1);
    let z2 = axis.coordinate(p2);
    on_axis(&axis, &[p1, p2], n, cfg, |z, rho| kernel(hypot(z - z1, rho), hypot(z - z2, rho)))
}

/// `∫ kernel(|x-P₀|, |x-P₁|, |x-P₂|) dx` over ℝ^N.
///
/// Collinear centers use the 2-D axisymmetric rule; anything else falls back
/// to seeded Monte Carlo, whose result is flagged when its standard error
/// exceeds the requested tolerance.
pub fn three_center_integral<K>(
    kernel: K,
    p0: &[f64],
    p1: &[f64],
    p2: &[f64],
    cfg: &QuadratureConfig,
) -> Result<CenterIntegral>
where
    K: Fn(f64, f64, f64) -> f64,
{
    let n = check_dims(&[p0, p1, p2])?;
    let pts = [p0, p1, p2];
    let mc = |cfg: &QuadratureConfig| {
        by_monte_carlo(&pts, cfg, |x| kernel(distance(x, p0), distance(x, p1), distance(x, p2)))
    };
    if cfg.method == QuadratureMethod::MonteCarlo {
        return mc(cfg);
    }
    if distance(p0, p1) == 0.0 && distance(p0, p2) == 0.0 {
        let est = radial_integral(|r| kernel(r, r, r), RADIAL_CUTOFF, n)?;
        return Ok(CenterIntegral::deterministic(est.value, est.error, false));
    }
    match Axis::through(&pts) {
        Some(axis) => {
            let z = [axis.coordinate(p0), axis.coordinate(p1), axis.coordinate(p2)];
            on_axis(&axis, &pts, n, cfg, |zz, rho| {
                kernel(hypot(zz - z[0], rho), hypot(zz - z[1], rho), hypot(zz - z[2], rho))
            })
        }
        None => mc(cfg),
    }
}
