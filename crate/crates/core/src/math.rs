//! Scalar helpers. Everything transcendental goes through `libm`.

use alloc::vec::Vec;

use crate::error::{Error, Result};

pub const PI: f64 = core::f64::consts::PI;

#[inline]
pub fn pow(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

/// `x^n` by binary exponentiation.
#[inline]
pub fn powi(x: f64, n: i32) -> f64 {
    let mut base = if n < 0 { 1.0 / x } else { x };
    let mut k = n.unsigned_abs();
    let mut acc = 1.0;
    while k > 0 {
        if k & 1 == 1 {
            acc *= base;
        }
        base *= base;
        k >>= 1;
    }
    acc
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn ln1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

#[inline]
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// Surface area of the unit sphere `S^{n-1} ⊂ ℝ^n`.
pub fn sphere_area(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    2.0 * pow(PI, h) / gamma(h)
}

/// Critical Sobolev exponent `2N/(N-2)`.
pub fn critical_exponent(n: usize) -> f64 {
    2.0 * n as f64 / (n as f64 - 2.0)
}

/// `n` points log-spaced from `a` to `b` inclusive.
pub fn log_space(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return alloc::vec![a];
    }
    let (la, lb) = (ln(a), ln(b));
    (0..n)
        .map(|i| {
            if i == 0 {
                a
            } else if i == n - 1 {
                b
            } else {
                exp(la + (lb - la) * i as f64 / (n - 1) as f64)
            }
        })
        .collect()
}

/// `n` points evenly spaced from `a` to `b` inclusive.
pub fn lin_space(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return alloc::vec![a];
    }
    (0..n)
        .map(|i| if i == n - 1 { b } else { a + (b - a) * i as f64 / (n - 1) as f64 })
        .collect()
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if abs(self.sum) >= abs(x) {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Ordinary least squares fit `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope (zero for an exact fit or two points).
    pub slope_stderr: f64,
    /// Half-width of the 95% confidence interval of the slope.
    pub slope_ci95: f64,
    pub samples: usize,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    let n = xs.len().min(ys.len());
    if n < 2 {
        return Err(Error::InsufficientData { what: "linear fit", needed: 2, got: n });
    }
    let nf = n as f64;
    let mx = xs[..n].iter().sum::<f64>() / nf;
    let my = ys[..n].iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for i in 0..n {
        let dx = xs[i] - mx;
        sxx += dx * dx;
        sxy += dx * (ys[i] - my);
    }
    if sxx == 0.0 {
        return Err(Error::InvalidParameter {
            name: "abscissae",
            value: mx,
            reason: "all x values coincide",
        });
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let (stderr, ci) = if n > 2 {
        let rss: f64 = (0..n)
            .map(|i| {
                let r = ys[i] - intercept - slope * xs[i];
                r * r
            })
            .sum();
        let se = sqrt(rss / (nf - 2.0) / sxx);
        (se, se * student_t975(n - 2))
    } else {
        (0.0, 0.0)
    };
    Ok(LinearFit { slope, intercept, slope_stderr: stderr, slope_ci95: ci, samples: n })
}

/// Fit `ln y = c + slope ln x`; all samples must be positive.
pub fn log_log_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    let mut lx = Vec::with_capacity(xs.len());
    let mut ly = Vec::with_capacity(ys.len());
    for (&x, &y) in xs.iter().zip(ys) {
        if !(x > 0.0 && y > 0.0) {
            return Err(Error::InvalidParameter {
                name: "log-log sample",
                value: if x > 0.0 { y } else { x },
                reason: "log-log regression needs positive samples",
            });
        }
        lx.push(ln(x));
        ly.push(ln(y));
    }
    linear_fit(&lx, &ly)
}

/// Two-sided 97.5% quantile of Student's t distribution.
fn student_t975(dof: usize) -> f64 {
    const TABLE: [f64; 30] = [
        12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228, 2.201, 2.179,
        2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064,
        2.060, 2.056, 2.052, 2.048, 2.045, 2.042,
    ];
    match dof {
        0 => f64::INFINITY,
        d if d <= 30 => TABLE[d - 1],
        _ => 1.960,
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    sqrt(dot(a, a))
}
