//! Bracketed scalar root finding: secant steps guarded by bisection.

use crate::error::{Error, Result};
use crate::math::abs;

#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    /// Stop once the bracket is narrower than `rtol * max(|a|, |b|) + atol`.
    pub rtol: f64,
    pub atol: f64,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self { rtol: 1e-12, atol: 0.0, max_iter: 200 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    /// Final bracket; `f` changes sign (or vanishes) on it.
    pub bracket: (f64, f64),
    pub iterations: usize,
}

/// Find a root of `f` on `[a, b]`, which must bracket a sign change.
///
/// Each iteration tries a secant (regula falsi) step from the bracket
/// endpoints, with the Illinois down-weighting of a stagnant endpoint. A
/// bisection step is forced whenever two consecutive steps failed to halve
/// the bracket, so the worst case is never slower than plain bisection.
pub fn find_root<F>(mut f: F, a: f64, b: f64, opts: RootOptions) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    for (x, fx) in [(a, fa), (b, fb)] {
        if !fx.is_finite() {
            return Err(Error::NonFinite { what: "root function value", value: x });
        }
    }
    if fa == 0.0 {
        return Ok(Root { x: a, bracket: (a, a), iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, bracket: (b, b), iterations: 0 });
    }
    if (fa > 0.0) == (fb > 0.0) {
        return Err(Error::NoSignChange { a, fa, b, fb });
    }

    // Illinois weights on the stored endpoint values.
    let (mut wa, mut wb) = (fa, fb);
    let mut last_side = 0i8;
    let mut slow_steps = 0usize;
    for it in 1..=opts.max_iter {
        let width = b - a;
        if width <= opts.rtol * abs(a).max(abs(b)) + opts.atol {
            let x = if abs(fa) < abs(fb) { a } else { b };
            return Ok(Root { x, bracket: (a, b), iterations: it - 1 });
        }
        let mut x = if slow_steps >= 2 {
            0.5 * (a + b)
        } else {
            b - wb * (b - a) / (wb - wa)
        };
        // Keep the trial point strictly inside and off the endpoints.
        let guard = 1e-3 * width;
        if !(x > a + guard && x < b - guard) || !x.is_finite() {
            x = 0.5 * (a + b);
        }
        let fx = f(x)?;
        if !fx.is_finite() {
            return Err(Error::NonFinite { what: "root function value", value: x });
        }
        if fx == 0.0 {
            return Ok(Root { x, bracket: (x, x), iterations: it });
        }
        if (fx > 0.0) == (fa > 0.0) {
            a = x;
            fa = fx;
            wa = fx;
            if last_side == -1 {
                wb *= 0.5;
            }
            last_side = -1;
        } else {
            b = x;
            fb = fx;
            wb = fx;
            if last_side == 1 {
                wa *= 0.5;
            }
            last_side = 1;
        }
        if b - a > 0.5 * width {
            slow_steps += 1;
        } else {
            slow_steps = 0;
        }
    }
    Err(Error::MaxIterations { what: "bracketed root", iterations: opts.max_iter })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two() {
        let r = find_root(|x| Ok(x * x - 2.0), 0.0, 2.0, RootOptions::default()).unwrap();
        assert!((r.x - core::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn no_sign_change_is_reported() {
        let err = find_root(|x| Ok(x * x + 1.0), -1.0, 1.0, RootOptions::default()).unwrap_err();
        assert!(matches!(err, Error::NoSignChange { .. }));
    }

    #[test]
    fn steep_function_converges() {
        // exp-like steepness that defeats plain secant iterations
        let r = find_root(
            |x| Ok(crate::math::exp(20.0 * x) - 1e5),
            -5.0,
            5.0,
            RootOptions { rtol: 1e-14, ..Default::default() },
        )
        .unwrap();
        assert!((r.x - crate::math::ln(1e5) / 20.0).abs() < 1e-12);
        assert!(r.iterations < 100);
    }

    #[test]
    fn root_at_endpoint() {
        let r = find_root(|x| Ok(x - 1.0), 1.0, 3.0, RootOptions::default()).unwrap();
        assert_eq!(r.x, 1.0);
    }
}
