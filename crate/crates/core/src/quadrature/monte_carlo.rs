//! Importance-sampled Monte Carlo over ℝ^N.
//!
//! Samples come from an equal-weight mixture of radial densities, one per
//! center, each with radial law `s/(s+r)²` and uniform direction. Every
//! component is visited in turn, so the estimator is stratified by center.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use super::Estimate;
use crate::error::{Error, Result};
use crate::math::{cos, ln, pow, sin, sphere_area, sqrt, PI};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McOptions {
    pub samples: u64,
    pub seed: u64,
    /// Radial length scale of the proposal around each center.
    pub scale: f64,
}

fn uniform(rng: &mut ChaCha20Rng) -> f64 {
    // 53 random bits in (0, 1)
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

fn gaussian_pair(rng: &mut ChaCha20Rng) -> (f64, f64) {
    let u1 = uniform(rng);
    let u2 = uniform(rng);
    let r = sqrt(-2.0 * ln(u1));
    (r * cos(2.0 * PI * u2), r * sin(2.0 * PI * u2))
}

/// Estimate `∫_{ℝ^N} f(x) dx` with a standard error from the sample variance.
pub fn integrate<F>(mut f: F, centers: &[&[f64]], opts: McOptions) -> Result<Estimate>
where
    F: FnMut(&[f64]) -> f64,
{
    let Some(first) = centers.first() else {
        return Err(Error::InvalidParameter { name: "centers", value: 0.0, reason: "need at least one center" });
    };
    if opts.samples < 2 {
        return Err(Error::InsufficientData { what: "Monte Carlo samples", needed: 2, got: opts.samples as usize });
    }
    let n = first.len();
    let k = centers.len() as f64;
    let s = opts.scale;
    let area = sphere_area(n);
    // density of one component at distance r from its center
    let component = |r: f64| s / ((s + r) * (s + r)) / (area * pow(r, (n - 1) as f64));

    let mut rng = ChaCha20Rng::seed_from_u64(opts.seed);
    let mut x = vec![0.0; n];
    let mut dir: Vec<f64> = vec![0.0; n];
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for i in 0..opts.samples {
        let c = centers[(i % centers.len() as u64) as usize];
        let u = uniform(&mut rng);
        let r = s * u / (1.0 - u);
        let mut j = 0;
        while j < n {
            let (g1, g2) = gaussian_pair(&mut rng);
            dir[j] = g1;
            if j + 1 < n {
                dir[j + 1] = g2;
            }
            j += 2;
        }
        let len = crate::math::norm(&dir);
        for d in 0..n {
            x[d] = c[d] + r * dir[d] / len;
        }
        let mut density = 0.0;
        for c in centers {
            density += component(crate::geometry::distance(&x, c));
        }
        density /= k;
        let w = f(&x) / density;
        if !w.is_finite() {
            return Err(Error::NonFinite { what: "Monte Carlo weight", value: w });
        }
        let delta = w - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (w - mean);
    }
    let var = m2 / (opts.samples - 1) as f64;
    Ok(Estimate { value: mean, error: sqrt(var / opts.samples as f64) })
}
