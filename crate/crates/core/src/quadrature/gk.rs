//! Globally adaptive 7/15-point Gauss–Kronrod quadrature on finite intervals.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::Estimate;
use crate::error::{Error, Result};
use crate::math::abs;

/// Kronrod abscissae on [-1, 1], descending, last one is the centre.
pub(crate) const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

pub(crate) const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// Gauss weights for the Kronrod abscissae with odd index (1, 3, 5) and the centre.
pub(crate) const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// The 15 Kronrod nodes on [-1, 1] with their Kronrod and embedded Gauss weights.
pub(crate) fn kronrod_nodes() -> [(f64, f64, f64); 15] {
    let mut out = [(0.0, 0.0, 0.0); 15];
    for j in 0..7 {
        let wg = if j % 2 == 1 { WG[j / 2] } else { 0.0 };
        out[j] = (-XGK[j], WGK[j], wg);
        out[14 - j] = (XGK[j], WGK[j], wg);
    }
    out[7] = (0.0, WGK[7], WG[3]);
    out
}

/// Kronrod estimate and |Kronrod - Gauss| on `[a, b]`.
pub(crate) fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, abs((k - g) * h))
}

#[derive(Debug, Clone, Copy)]
pub struct GkOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_segments: usize,
}

impl Default for GkOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-14, rel_tol: 1e-11, max_segments: 4000 }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrate `f` over `[points[0], points[last]]`, with every interior entry
/// of `points` used as an initial breakpoint.
pub fn integrate<F>(f: F, points: &[f64], opts: GkOptions) -> Result<Estimate>
where
    F: FnMut(f64) -> f64,
{
    adapt(f, points, opts).map(|(est, _)| est)
}

/// As [`integrate`], also returning the final segments in ascending order.
pub fn adapt<F>(mut f: F, points: &[f64], opts: GkOptions) -> Result<(Estimate, Vec<(f64, f64)>)>
where
    F: FnMut(f64) -> f64,
{
    if points.len() < 2 {
        return Ok((Estimate::default(), Vec::new()));
    }
    let mut heap = BinaryHeap::new();
    let mut done: Vec<Segment> = Vec::new();
    for w in points.windows(2) {
        if w[1] > w[0] {
            let (value, error) = gk15(&mut f, w[0], w[1]);
            heap.push(Segment { a: w[0], b: w[1], value, error });
        }
    }
    let totals = |heap: &BinaryHeap<Segment>, done: &[Segment]| {
        let mut v = crate::math::CompensatedSum::new();
        let mut e = 0.0;
        for s in heap.iter().chain(done.iter()) {
            v.add(s.value);
            e += s.error;
        }
        (v.value(), e)
    };
    let (mut value, mut error) = totals(&heap, &done);
    loop {
        if !value.is_finite() {
            return Err(Error::NonFinite { what: "quadrature value", value });
        }
        if error <= opts.abs_tol.max(opts.rel_tol * abs(value)) {
            break;
        }
        if heap.len() + done.len() >= opts.max_segments {
            return Err(Error::ToleranceNotMet {
                value,
                error,
                requested: opts.abs_tol.max(opts.rel_tol * abs(value)),
            });
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b)
            || (worst.b - worst.a) <= 1e-14 * abs(mid).max(f64::MIN_POSITIVE)
        {
            // Cannot be split further in floating point.
            done.push(worst);
            if heap.is_empty() {
                break;
            }
            continue;
        }
        let (v1, e1) = gk15(&mut f, worst.a, mid);
        let (v2, e2) = gk15(&mut f, mid, worst.b);
        value += v1 + v2 - worst.value;
        error += e1 + e2 - worst.error;
        heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2 });
        if (heap.len() + done.len()).is_multiple_of(64) {
            (value, error) = totals(&heap, &done);
        }
    }
    let (value, error) = totals(&heap, &done);
    let mut segs: Vec<(f64, f64)> = heap.iter().chain(done.iter()).map(|s| (s.a, s.b)).collect();
    segs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok((Estimate { value, error }, segs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let est = integrate(|x| x * x * x * x, &[0.0, 2.0], GkOptions::default()).unwrap();
        assert!((est.value - 32.0 / 5.0).abs() < 1e-13);
    }

    #[test]
    fn sqrt_singularity() {
        let est = integrate(crate::math::sqrt, &[0.0, 1.0], GkOptions::default()).unwrap();
        assert!((est.value - 2.0 / 3.0).abs() < 1e-11);
    }

    #[test]
    fn step_function_converges() {
        let est = integrate(
            |x| if x < 0.3 { 1.0 } else { 0.0 },
            &[0.0, 1.0],
            GkOptions { rel_tol: 1e-10, ..Default::default() },
        )
        .unwrap();
        assert!((est.value - 0.3).abs() < 1e-9);
    }

    #[test]
    fn kronrod_weights_sum_to_two() {
        let nodes = kronrod_nodes();
        let wk: f64 = nodes.iter().map(|n| n.1).sum();
        let wg: f64 = nodes.iter().map(|n| n.2).sum();
        assert!((wk - 2.0).abs() < 1e-14);
        assert!((wg - 2.0).abs() < 1e-14);
    }
}
