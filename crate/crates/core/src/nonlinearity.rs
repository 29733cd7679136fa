//! The double-power nonlinearity `f(s) = s^{q-1} / (1 + s^{q-p})`, extended
//! oddly to `s < 0`, and numerical audits of its growth conditions.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{ensure_finite, Error, Result};
use crate::math::{abs, critical_exponent, floor, ln, pow, powi};
use crate::quadrature::gk::{self, GkOptions};

const NODES_PER_DECADE: f64 = 256.0;
const CACHE_TOP: f64 = 1e3;

/// Exponents of the model nonlinearity in dimension `n`.
///
/// Construction validates `2 < p < 2* < q` and tabulates the primitive
/// `F(s) = ∫₀ˢ f` once; evaluation afterwards is read-only.
#[derive(Debug, Clone)]
pub struct NonlinearitySpec {
    n: usize,
    p: f64,
    q: f64,
    cache: PrimitiveCache,
}

impl PartialEq for NonlinearitySpec {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.p == other.p && self.q == other.q
    }
}

#[derive(Debug, Clone)]
struct PrimitiveCache {
    /// Below this the primitive comes from its power series.
    s_lo: f64,
    log_lo: f64,
    dlog: f64,
    s: Vec<f64>,
    big_f: Vec<f64>,
    f: Vec<f64>,
    df: Vec<f64>,
}

/// Result of [`NonlinearitySpec::growth_audit`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GrowthAudit {
    /// Smallest `A₁` with `|f^{(m)}(s)| ≤ A₁ min(s^{p-m-1}, s^{q-m-1})`, `m ∈ {-1,0,1}`, on the grid.
    pub a1_est: f64,
    /// Largest `θ` with `θ F(s) ≤ f(s) s` on the grid.
    pub theta_est: f64,
    /// `g` at the smallest and at the largest grid point.
    pub g_limits: (f64, f64),
    pub monotone_ok: bool,
    pub failures: Vec<String>,
}

impl GrowthAudit {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl NonlinearitySpec {
    pub fn new(n: usize, p: f64, q: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter { name: "N", value: n as f64, reason: "dimension must be at least 3" });
        }
        ensure_finite("p", p)?;
        ensure_finite("q", q)?;
        let crit = critical_exponent(n);
        if !(p > 2.0) {
            return Err(Error::InvalidParameter { name: "p", value: p, reason: "need p > 2" });
        }
        if !(p < crit) {
            return Err(Error::InvalidParameter { name: "p", value: p, reason: "need p < 2N/(N-2)" });
        }
        if !(q > crit) {
            return Err(Error::InvalidParameter { name: "q", value: q, reason: "need q > 2N/(N-2)" });
        }
        let mut spec = Self { n, p, q, cache: PrimitiveCache { s_lo: 0.0, log_lo: 0.0, dlog: 1.0, s: Vec::new(), big_f: Vec::new(), f: Vec::new(), df: Vec::new() } };
        spec.cache = spec.build_cache()?;
        Ok(spec)
    }

    /// `(N, p, q) = (3, 4, 8)`.
    pub fn model() -> Self {
        Self::new(3, 4.0, 8.0).expect("default exponents are admissible")
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn critical_exponent(&self) -> f64 {
        critical_exponent(self.n)
    }

    /// `f(s)`, odd in `s`.
    pub fn f(&self, s: f64) -> f64 {
        let a = abs(s);
        let v = if a == 0.0 {
            0.0
        } else if a <= 1.0 {
            xpow(a, self.q - 1.0) / (1.0 + xpow(a, self.q - self.p))
        } else {
            xpow(a, self.p - 1.0) / (xpow(a, self.p - self.q) + 1.0)
        };
        if s < 0.0 {
            -v
        } else {
            v
        }
    }

    /// `f'(s)`, even in `s`.
    pub fn df(&self, s: f64) -> f64 {
        let (p, q) = (self.p, self.q);
        let a = abs(s);
        if a == 0.0 {
            0.0
        } else if a <= 1.0 {
            let t = xpow(a, q - p);
            xpow(a, q - 2.0) * ((q - 1.0) + (p - 1.0) * t) / ((1.0 + t) * (1.0 + t))
        } else {
            let w = xpow(a, p - q);
            xpow(a, p - 2.0) * ((q - 1.0) * w + (p - 1.0)) / ((1.0 + w) * (1.0 + w))
        }
    }

    /// `F(s) = ∫₀ˢ f`, even in `s`.
    pub fn primitive(&self, s: f64) -> f64 {
        let a = abs(s);
        let c = &self.cache;
        if a <= c.s_lo {
            return self.primitive_series(a);
        }
        let last = c.s.len() - 1;
        if a >= c.s[last] {
            if a == c.s[last] {
                return c.big_f[last];
            }
            let tail = gk::integrate(|t| self.f(t), &[c.s[last], a], GkOptions { abs_tol: 0.0, rel_tol: 1e-14, max_segments: 200 })
                .map(|e| e.value)
                .unwrap_or(f64::NAN);
            return c.big_f[last] + tail;
        }
        let i = (floor((ln(a) - c.log_lo) / c.dlog) as usize).min(last - 1);
        // guard against rounding at cell edges
        let i = if a < c.s[i] { i.saturating_sub(1) } else if a > c.s[i + 1] { i + 1 } else { i };
        let (x0, x1) = (c.s[i], c.s[i + 1]);
        let h = x1 - x0;
        let t = (a - x0) / h;
        let (t2, t3) = (t * t, t * t * t);
        let (t4, t5) = (t3 * t, t3 * t2);
        let h00 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
        let h10 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
        let h20 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
        let h01 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
        let h11 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
        let h21 = 0.5 * (t3 - 2.0 * t4 + t5);
        c.big_f[i] * h00
            + h * c.f[i] * h10
            + h * h * c.df[i] * h20
            + c.big_f[i + 1] * h01
            + h * c.f[i + 1] * h11
            + h * h * c.df[i + 1] * h21
    }

    /// `Σ_k (-1)^k s^{q+k(q-p)} / (q+k(q-p))`, valid for `s^{q-p} < 1`.
    fn primitive_series(&self, a: f64) -> f64 {
        if a == 0.0 {
            return 0.0;
        }
        let d = self.q - self.p;
        let ratio = pow(a, d);
        let mut term = pow(a, self.q);
        let mut sum = 0.0;
        for k in 0..400 {
            let e = self.q + k as f64 * d;
            let contrib = term / e;
            sum += if k % 2 == 0 { contrib } else { -contrib };
            if contrib <= 1e-18 * abs(sum) {
                break;
            }
            term *= ratio;
        }
        sum
    }

    fn build_cache(&self) -> Result<PrimitiveCache> {
        let s_lo = 0.25f64.min(pow(0.5, 1.0 / (self.q - self.p)));
        let log_lo = ln(s_lo);
        let dlog = core::f64::consts::LN_10 / NODES_PER_DECADE;
        let count = floor((ln(CACHE_TOP) - log_lo) / dlog) as usize + 2;
        let mut s = Vec::with_capacity(count);
        let mut big_f = Vec::with_capacity(count);
        s.push(s_lo);
        big_f.push(self.primitive_series(s_lo));
        for i in 1..count {
            let x = crate::math::exp(log_lo + i as f64 * dlog);
            let prev = s[i - 1];
            let piece = gk::integrate(|t| self.f(t), &[prev, x], GkOptions { abs_tol: 0.0, rel_tol: 1e-15, max_segments: 64 })
                .or_else(|e| match e {
                    Error::ToleranceNotMet { value, .. } => Ok(crate::quadrature::Estimate::new(value, 0.0)),
                    e => Err(e),
                })?;
            s.push(x);
            big_f.push(big_f[i - 1] + piece.value);
        }
        let f = s.iter().map(|&x| self.f(x)).collect();
        let df = s.iter().map(|&x| self.df(x)).collect();
        Ok(PrimitiveCache { s_lo, log_lo, dlog, s, big_f, f, df })
    }

    /// `(F(s), f(s), f'(s))`.
    pub fn eval(&self, s: f64) -> Result<(f64, f64, f64)> {
        ensure_finite("nonlinearity argument", s)?;
        Ok((self.primitive(s), self.f(s), self.df(s)))
    }

    /// `g(s) = s f'(s) / f(s)` for `s > 0`.
    pub fn logarithmic_derivative(&self, s: f64) -> Result<f64> {
        ensure_finite("nonlinearity argument", s)?;
        if !(s > 0.0) {
            return Err(Error::InvalidParameter { name: "s", value: s, reason: "logarithmic derivative needs s > 0" });
        }
        let (p, q) = (self.p, self.q);
        Ok(if s <= 1.0 {
            let t = pow(s, q - p);
            ((q - 1.0) + (p - 1.0) * t) / (1.0 + t)
        } else {
            let w = pow(s, p - q);
            ((q - 1.0) * w + (p - 1.0)) / (w + 1.0)
        })
    }

    /// Sample the growth conditions on a log-spaced grid covering `[1e-4, 1e4]`.
    pub fn growth_audit(&self, s_grid: &[f64]) -> Result<GrowthAudit> {
        if s_grid.len() < 200 {
            return Err(Error::InsufficientData { what: "growth audit grid", needed: 200, got: s_grid.len() });
        }
        if s_grid.windows(2).any(|w| !(w[1] > w[0])) || !(s_grid[0] > 0.0) {
            return Err(Error::InvalidParameter { name: "s_grid", value: s_grid[0], reason: "grid must be positive and increasing" });
        }
        let (lo, hi) = (s_grid[0], s_grid[s_grid.len() - 1]);
        if lo > 1e-4 * (1.0 + 1e-12) || hi < 1e4 * (1.0 - 1e-12) {
            return Err(Error::InvalidParameter { name: "s_grid", value: if lo > 1e-4 { lo } else { hi }, reason: "grid must span [1e-4, 1e4]" });
        }
        let (p, q) = (self.p, self.q);
        let tol = 1e-9;
        let mut a1: f64 = 0.0;
        let mut theta = f64::INFINITY;
        let mut failures = Vec::new();
        let mut monotone_ok = true;
        let mut prev_g = f64::INFINITY;
        for &s in s_grid {
            let (big_f, f, df) = self.eval(s)?;
            for (m, v) in [(-1.0, big_f), (0.0, f), (1.0, df)] {
                let env = pow(s, p - (m + 1.0)).min(pow(s, q - (m + 1.0)));
                if env > 0.0 {
                    a1 = a1.max(abs(v) / env);
                }
            }
            if big_f > 0.0 {
                theta = theta.min(f * s / big_f);
            }
            let g = self.logarithmic_derivative(s)?;
            if g > prev_g * (1.0 + tol) {
                monotone_ok = false;
            }
            prev_g = g;
            if big_f < 0.0 {
                failures.push(format!("F({s:e}) < 0"));
            }
            if !(df * s * s - f * s > -tol * f * s) {
                failures.push(format!("f(s)s < f'(s)s^2 fails at s = {s:e}"));
            }
        }
        let crit = self.critical_exponent();
        let g_limits = (self.logarithmic_derivative(lo)?, self.logarithmic_derivative(hi)?);
        if !(theta > 2.0) {
            failures.push(format!("theta estimate {theta} is not above 2"));
        }
        if !monotone_ok {
            failures.push(String::from("g is not non-increasing on the grid"));
        }
        if !(g_limits.1 < crit - 1.0 && crit - 1.0 < g_limits.0) {
            failures.push(format!("g limits ({}, {}) do not straddle 2*-1 = {}", g_limits.0, g_limits.1, crit - 1.0));
        }
        Ok(GrowthAudit { a1_est: a1, theta_est: theta, g_limits, monotone_ok, failures })
    }

    /// Superadditivity defect `F(s+t) - F(s) - F(t) - f(s)t - f(t)s`.
    pub fn superadditivity_defect(&self, s: f64, t: f64) -> f64 {
        self.primitive(s + t) - self.primitive(s) - self.primitive(t) - self.f(s) * t - self.f(t) * s
    }

    /// Smallest `C ≥ 0` with `defect(s,t) ≥ -C (st)^{1+ν/2}` on the uniform
    /// `grid × grid` lattice of `[0, a]²`.
    pub fn lemma_new_constant(&self, a: f64, nu: f64, grid: usize) -> Result<f64> {
        ensure_finite("a", a)?;
        ensure_finite("nu", nu)?;
        if !(a > 0.0) {
            return Err(Error::InvalidParameter { name: "a", value: a, reason: "need a > 0" });
        }
        if !(nu > 0.0 && nu < self.q - 2.0) {
            return Err(Error::InvalidParameter { name: "nu", value: nu, reason: "need 0 < nu < q - 2" });
        }
        if grid < 100 {
            return Err(Error::InsufficientData { what: "superadditivity grid", needed: 100, got: grid });
        }
        let pts = crate::math::lin_space(0.0, a, grid);
        let mut c: f64 = 0.0;
        for (i, &s) in pts.iter().enumerate().skip(1) {
            for &t in &pts[i..] {
                let d = self.superadditivity_defect(s, t);
                let w = pow(s * t, 1.0 + 0.5 * nu);
                if d < 0.0 {
                    c = c.max(-d / w);
                }
            }
        }
        Ok(c)
    }

    /// Midpoint of the admissible range `(2/(N-2), q-2)` for `ν`.
    pub fn default_nu(&self) -> f64 {
        0.5 * (2.0 / (self.n as f64 - 2.0) + self.q - 2.0)
    }
}

/// `a^e`, by repeated multiplication when `e` is a small integer.
fn xpow(a: f64, e: f64) -> f64 {
    if e == floor(e) && abs(e) <= 64.0 {
        powi(a, e as i32)
    } else {
        pow(a, e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{ln1p, log_space};

    /// Closed form for `(p, q) = (4, 8)`: `F(s) = s⁴/4 - ln(1+s⁴)/4`.
    fn primitive_48(s: f64) -> f64 {
        let s4 = s * s * s * s;
        if s4 < 1e-3 {
            // avoid cancellation: s⁸/8 - s¹²/12 + s¹⁶/16 - ...
            let mut sum = 0.0;
            let mut term = s4 * s4;
            for k in 0..20 {
                let e = 8.0 + 4.0 * k as f64;
                sum += if k % 2 == 0 { term / e } else { -term / e };
                term *= s4;
            }
            sum
        } else {
            0.25 * s4 - 0.25 * ln1p(s4)
        }
    }

    #[test]
    fn primitive_matches_closed_form() {
        let spec = NonlinearitySpec::model();
        for s in log_space(1e-3, 5e3, 997) {
            let got = spec.primitive(s);
            let want = primitive_48(s);
            assert!((got - want).abs() <= 1e-12 * want.abs() + 1e-300, "s={s} got={got} want={want}");
        }
    }

    #[test]
    fn values_at_one() {
        let spec = NonlinearitySpec::new(3, 3.5, 7.0).unwrap();
        let (_, f, df) = spec.eval(1.0).unwrap();
        assert_eq!(f, 0.5);
        assert!((df - (3.5 + 7.0 - 2.0) / 4.0).abs() < 1e-15);
        assert!((spec.logarithmic_derivative(1.0).unwrap() - (3.5 + 7.0 - 2.0) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn derivative_matches_central_difference() {
        let spec = NonlinearitySpec::model();
        let h = 1e-6;
        let fd = (spec.f(1.0 + h) - spec.f(1.0 - h)) / (2.0 * h);
        assert!((fd - 2.5).abs() < 1e-8);
        assert_eq!(spec.df(1.0), 2.5);
    }

    #[test]
    fn odd_extension() {
        let spec = NonlinearitySpec::model();
        for s in [0.1, 0.7, 1.3, 40.0] {
            assert_eq!(spec.f(-s), -spec.f(s));
            assert_eq!(spec.primitive(-s), spec.primitive(s));
            assert_eq!(spec.df(-s), spec.df(s));
        }
    }

    #[test]
    fn rejects_bad_exponents() {
        assert!(NonlinearitySpec::new(3, 2.0, 8.0).is_err());
        assert!(NonlinearitySpec::new(3, 4.0, 6.0).is_err());
        assert!(NonlinearitySpec::new(3, 7.0, 8.0).is_err());
        assert!(NonlinearitySpec::new(2, 4.0, 8.0).is_err());
        assert!(NonlinearitySpec::model().eval(f64::NAN).is_err());
        assert!(NonlinearitySpec::model().logarithmic_derivative(0.0).is_err());
    }

    #[test]
    fn audit_model() {
        let spec = NonlinearitySpec::model();
        let audit = spec.growth_audit(&log_space(1e-4, 1e4, 400)).unwrap();
        assert!(audit.passed(), "{:?}", audit.failures);
        assert!(audit.theta_est >= 4.0 - 1e-9, "{}", audit.theta_est);
        assert!((audit.g_limits.0 - 7.0).abs() < 1e-6);
        assert!((audit.g_limits.1 - 3.0).abs() < 1e-6);
    }

    #[test]
    fn audit_needs_a_wide_grid() {
        let spec = NonlinearitySpec::model();
        assert!(spec.growth_audit(&log_space(1e-2, 1e4, 400)).is_err());
        assert!(spec.growth_audit(&log_space(1e-4, 1e4, 50)).is_err());
    }

    #[test]
    fn defect_vanishes_on_axis() {
        let spec = NonlinearitySpec::model();
        assert_eq!(spec.superadditivity_defect(0.0, 1.3), 0.0);
        assert!(spec.lemma_new_constant(2.0, 1.0, 100).unwrap().is_finite());
        assert!(spec.lemma_new_constant(2.0, 6.0, 100).is_err());
    }
}
