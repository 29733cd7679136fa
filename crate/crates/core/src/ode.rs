//! Dormand–Prince 5(4) with FSAL and per-component error scaling.

use crate::error::{Error, Result};
use crate::math::{abs, pow, sqrt};

pub trait System<const D: usize> {
    fn rhs(&self, t: f64, y: &[f64; D]) -> [f64; D];

    /// Componentwise scale the local error is measured against.
    fn error_scale(&self, _t: f64, y0: &[f64; D], y1: &[f64; D], rtol: f64, atol: f64) -> [f64; D] {
        let mut s = [0.0; D];
        for i in 0..D {
            s[i] = atol + rtol * abs(y0[i]).max(abs(y1[i]));
        }
        s
    }

    fn max_step(&self, _t: f64) -> f64 {
        f64::INFINITY
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOptions {
    pub rtol: f64,
    pub atol: f64,
    pub initial_step: f64,
    pub max_steps: usize,
}

impl Default for StepOptions {
    fn default() -> Self {
        Self { rtol: 1e-12, atol: 1e-200, initial_step: 1e-4, max_steps: 1_000_000 }
    }
}

pub enum Control {
    Continue,
    Stop,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome<const D: usize> {
    pub t: f64,
    pub y: [f64; D],
    pub accepted: usize,
    pub rejected: usize,
    /// The observer asked to stop before `t_end`.
    pub stopped: bool,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth minus fourth order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn comb<const D: usize>(y: &[f64; D], h: f64, terms: &[(f64, &[f64; D])]) -> [f64; D] {
    let mut out = *y;
    for i in 0..D {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] += h * acc;
    }
    out
}

/// Integrate from `t0` to `t_end > t0`, calling `observe(t, y, dy)` after
/// every accepted step.
pub fn integrate<const D: usize, S, O>(
    sys: &S,
    t0: f64,
    y0: [f64; D],
    t_end: f64,
    opts: StepOptions,
    mut observe: O,
) -> Result<Outcome<D>>
where
    S: System<D>,
    O: FnMut(f64, &[f64; D], &[f64; D]) -> Control,
{
    let mut t = t0;
    let mut y = y0;
    let mut k1 = sys.rhs(t, &y);
    let mut h = opts.initial_step.min(t_end - t0);
    let mut accepted = 0;
    let mut rejected = 0;
    while t < t_end {
        if accepted + rejected >= opts.max_steps {
            return Err(Error::MaxIterations { what: "ODE steps", iterations: opts.max_steps });
        }
        h = h.min(sys.max_step(t)).min(t_end - t);
        if h < 1e-14 * abs(t).max(1.0) {
            return Err(Error::StepUnderflow { r: t, step: h });
        }
        let k2 = sys.rhs(t + C2 * h, &comb(&y, h, &[(A21, &k1)]));
        let k3 = sys.rhs(t + C3 * h, &comb(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = sys.rhs(t + C4 * h, &comb(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = sys.rhs(t + C5 * h, &comb(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = sys.rhs(t + h, &comb(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let y1 = comb(&y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = sys.rhs(t + h, &y1);
        let scale = sys.error_scale(t + h, &y, &y1, opts.rtol, opts.atol);
        let mut err = 0.0;
        let mut finite = true;
        for i in 0..D {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let r = e / scale[i];
            err += r * r;
            finite &= y1[i].is_finite();
        }
        let err = sqrt(err / D as f64);
        if !finite || !err.is_finite() {
            rejected += 1;
            h *= 0.2;
            continue;
        }
        if err <= 1.0 {
            t += h;
            y = y1;
            k1 = k7;
            accepted += 1;
            let grow = if err == 0.0 { 5.0 } else { (0.9 * pow(err, -0.2)).clamp(0.2, 5.0) };
            h *= grow;
            if let Control::Stop = observe(t, &y, &k1) {
                return Ok(Outcome { t, y, accepted, rejected, stopped: true });
            }
        } else {
            rejected += 1;
            h *= (0.9 * pow(err, -0.2)).clamp(0.2, 1.0);
        }
    }
    Ok(Outcome { t, y, accepted, rejected, stopped: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{cos, exp, sin};

    struct Decay;
    impl System<1> for Decay {
        fn rhs(&self, _t: f64, y: &[f64; 1]) -> [f64; 1] {
            [-y[0]]
        }
    }

    struct Oscillator;
    impl System<2> for Oscillator {
        fn rhs(&self, _t: f64, y: &[f64; 2]) -> [f64; 2] {
            [y[1], -y[0]]
        }
    }

    #[test]
    fn exponential_decay() {
        let out = integrate(&Decay, 0.0, [1.0], 5.0, StepOptions::default(), |_, _, _| Control::Continue).unwrap();
        assert!((out.y[0] - exp(-5.0)).abs() < 1e-12);
        assert_eq!(out.t, 5.0);
    }

    #[test]
    fn harmonic_oscillator() {
        let out = integrate(&Oscillator, 0.0, [0.0, 1.0], 10.0, StepOptions::default(), |_, _, _| Control::Continue).unwrap();
        assert!((out.y[0] - sin(10.0)).abs() < 1e-10);
        assert!((out.y[1] - cos(10.0)).abs() < 1e-10);
    }

    #[test]
    fn observer_can_stop() {
        let out = integrate(&Oscillator, 0.0, [0.0, 1.0], 10.0, StepOptions::default(), |_, y, _| {
            if y[0] < 0.0 {
                Control::Stop
            } else {
                Control::Continue
            }
        })
        .unwrap();
        assert!(out.stopped);
        assert!(out.t > crate::math::PI && out.t < 4.0);
    }
}
