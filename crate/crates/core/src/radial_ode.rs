//! Radial ground state of `-Δu = f(u)` by shooting on the amplitude `u(0)`.
//!
//! The radial equation `u'' + (N-1)/r u' + f(u) = 0` is started off the
//! singular origin with its Taylor series and continued with Dormand–Prince
//! 5(4). Each trajectory is classified as
//!
//! * `Crossing`: `u` reaches zero,
//! * `SlowDecay`: `r^{N-2} u` grows past a multiple of its running minimum,
//! * `FastCandidate`: positive up to `r_max`.
//!
//! The ground state sits on the boundary between the first two outcomes;
//! a coarse sweep finds a bracket and bisection closes it.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::math::{abs, linear_fit, log_log_fit, log_space, pow, sqrt, LinearFit};
use crate::nonlinearity::NonlinearitySpec;
use crate::ode::{self, Control, StepOptions, System};
use crate::quadrature::{radial_integral, Estimate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ShotKind {
    Crossing,
    SlowDecay,
    FastCandidate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ShotClass {
    pub kind: ShotKind,
    pub r_event: f64,
    /// `(N-2) u + r u'` at the last radius: the sign of `d/dr (r^{N-2} u)`.
    pub lean: f64,
}

impl ShotClass {
    /// Whether the shot lies on the crossing side of the ground state.
    /// Fast candidates are assigned by the sign of their lean.
    pub fn overshoots(&self) -> bool {
        match self.kind {
            ShotKind::Crossing => true,
            ShotKind::SlowDecay => false,
            ShotKind::FastCandidate => self.lean < 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    pub r_max: f64,
    /// Growth factor of `r^{N-2} u` over its running minimum that marks slow decay.
    pub slow_factor: f64,
    /// Radius after which the running minimum is tracked.
    pub slow_after: f64,
    /// Relative width at which amplitude bisection stops.
    pub amplitude_rtol: f64,
    pub sweep_min: f64,
    pub sweep_max: f64,
    pub sweep_points: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            atol: 1e-200,
            r_max: 1e4,
            slow_factor: 10.0,
            slow_after: 10.0,
            amplitude_rtol: 1e-12,
            sweep_min: 1e-2,
            sweep_max: 1e2,
            sweep_points: 41,
        }
    }
}

/// Accepted steps of one shot, starting at `r = 0`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trajectory {
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub du: Vec<f64>,
}

struct Radial<'a> {
    spec: &'a NonlinearitySpec,
    nm1: f64,
}

impl System<2> for Radial<'_> {
    fn rhs(&self, r: f64, y: &[f64; 2]) -> [f64; 2] {
        [y[1], -self.nm1 / r * y[1] - self.spec.f(y[0])]
    }

    // `u ≈ r |u'|` on the power-law tail, so each component is also
    // measured against the other one rescaled by `r`.
    fn error_scale(&self, r: f64, y0: &[f64; 2], y1: &[f64; 2], rtol: f64, atol: f64) -> [f64; 2] {
        let rr = r.max(1.0);
        [
            atol + rtol * abs(y0[0]).max(abs(y1[0])).max(rr * abs(y1[1])),
            atol + rtol * abs(y0[1]).max(abs(y1[1])).max(abs(y1[0]) / rr),
        ]
    }

    fn max_step(&self, r: f64) -> f64 {
        0.02 * r.max(1.0)
    }
}

/// Series start `(r₀, u(r₀), u'(r₀))` off the origin.
fn series_start(spec: &NonlinearitySpec, a: f64) -> (f64, f64, f64) {
    let n = spec.dimension() as f64;
    let fa = spec.f(a);
    let dfa = spec.df(a);
    let r0 = 1e-3 / sqrt(abs(dfa)).max(1.0);
    let r2 = r0 * r0;
    let u = a - fa * r2 / (2.0 * n) + fa * dfa * r2 * r2 / (8.0 * n * (n + 2.0));
    let du = -fa * r0 / n + fa * dfa * r2 * r0 / (2.0 * n * (n + 2.0));
    (r0, u, du)
}

/// Integrate one shot from `u(0) = amplitude` and classify it.
pub fn shoot(spec: &NonlinearitySpec, amplitude: f64, ctl: &StepControl) -> Result<(Trajectory, ShotClass)> {
    if !(amplitude > 0.0 && amplitude.is_finite()) {
        return Err(Error::InvalidParameter { name: "amplitude", value: amplitude, reason: "must be positive and finite" });
    }
    if !(ctl.r_max > 1.0) {
        return Err(Error::InvalidParameter { name: "r_max", value: ctl.r_max, reason: "must exceed 1" });
    }
    let n = spec.dimension();
    let nm2 = n as f64 - 2.0;
    let sys = Radial { spec, nm1: n as f64 - 1.0 };
    let (r0, u0, du0) = series_start(spec, amplitude);
    let mut traj = Trajectory::default();
    traj.r.extend_from_slice(&[0.0, r0]);
    traj.u.extend_from_slice(&[amplitude, u0]);
    traj.du.extend_from_slice(&[0.0, du0]);
    let mut class = None;
    let mut running_min = f64::INFINITY;
    let opts = StepOptions { rtol: ctl.rtol, atol: ctl.atol, initial_step: r0, max_steps: 2_000_000 };
    let out = ode::integrate(&sys, r0, [u0, du0], ctl.r_max, opts, |r, y, _| {
        traj.r.push(r);
        traj.u.push(y[0]);
        traj.du.push(y[1]);
        let lean = nm2 * y[0] + r * y[1];
        if y[0] <= 0.0 {
            class = Some(ShotClass { kind: ShotKind::Crossing, r_event: r, lean });
            return Control::Stop;
        }
        if r > ctl.slow_after {
            let m = pow(r, nm2) * y[0];
            running_min = running_min.min(m);
            if m > ctl.slow_factor * running_min {
                class = Some(ShotClass { kind: ShotKind::SlowDecay, r_event: r, lean });
                return Control::Stop;
            }
        }
        Control::Continue
    })?;
    let class = class.unwrap_or(ShotClass {
        kind: ShotKind::FastCandidate,
        r_event: out.t,
        lean: nm2 * out.y[0] + out.t * out.y[1],
    });
    Ok((traj, class))
}

fn describe(c: &ShotClass) -> String {
    format!("{:?} at r = {:.6e}", c.kind, c.r_event)
}

/// Ground state by coarse sweep and amplitude bisection.
pub fn ground_state(spec: &NonlinearitySpec, ctl: &StepControl) -> Result<RadialProfile> {
    let amps = log_space(ctl.sweep_min, ctl.sweep_max, ctl.sweep_points.max(2));
    let mut sweep: Vec<(f64, ShotClass)> = Vec::with_capacity(amps.len());
    let mut bracket = None;
    for &a in &amps {
        let (_, c) = shoot(spec, a, ctl)?;
        if let Some(&(prev_a, prev_c)) = sweep.last() {
            if prev_c.overshoots() != c.overshoots() && bracket.is_none() {
                bracket = Some((prev_a, prev_c.overshoots(), a));
            }
        }
        sweep.push((a, c));
        if bracket.is_some() {
            break;
        }
    }
    let Some((mut lo, lo_over, mut hi)) = bracket else {
        return Err(Error::NoBracket { sweep: sweep.iter().map(|(a, c)| (*a, describe(c))).collect() });
    };
    let mut best: Option<(f64, Trajectory, ShotClass)> = None;
    while hi - lo > ctl.amplitude_rtol * hi {
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            break;
        }
        let (traj, c) = shoot(spec, mid, ctl)?;
        if c.overshoots() == lo_over {
            lo = mid;
        } else {
            hi = mid;
        }
        if c.kind == ShotKind::FastCandidate {
            best = Some((mid, traj, c));
        }
    }
    let mid = 0.5 * (lo + hi);
    let (traj, c) = shoot(spec, mid, ctl)?;
    let traj = if c.kind == ShotKind::FastCandidate {
        traj
    } else if let Some((_, t, _)) = best {
        t
    } else {
        return Err(Error::NoBracket { sweep: alloc::vec![(lo, String::from("bracket lower end")), (mid, describe(&c)), (hi, String::from("bracket upper end"))] });
    };
    let tail_c = fit_tail(spec.dimension(), &traj)?;
    RadialProfile::from_samples(spec, traj.r, traj.u, traj.du, tail_c)
}

/// Least-squares constant fit of `r^{N-2} u` over the last decade.
fn fit_tail(n: usize, traj: &Trajectory) -> Result<f64> {
    let r_max = *traj.r.last().unwrap_or(&0.0);
    let nm2 = n as f64 - 2.0;
    let mut sum = 0.0;
    let mut count = 0usize;
    for (r, u) in traj.r.iter().zip(&traj.u) {
        if *r >= 0.1 * r_max {
            sum += pow(*r, nm2) * u;
            count += 1;
        }
    }
    if count < 2 {
        return Err(Error::InsufficientData { what: "tail samples", needed: 2, got: count });
    }
    Ok(sum / count as f64)
}

/// Sampled radial profile with quintic Hermite interpolation between nodes
/// and the power law `tail_c r^{-(N-2)}` beyond the last node.
#[derive(Debug)]
pub struct RadialProfile {
    n: usize,
    p: f64,
    q: f64,
    r: Vec<f64>,
    u: Vec<f64>,
    du: Vec<f64>,
    ddu: Vec<f64>,
    dddu: Vec<f64>,
    tail_c: f64,
    extrapolations: AtomicU64,
}

impl Clone for RadialProfile {
    fn clone(&self) -> Self {
        Self {
            n: self.n,
            p: self.p,
            q: self.q,
            r: self.r.clone(),
            u: self.u.clone(),
            du: self.du.clone(),
            ddu: self.ddu.clone(),
            dddu: self.dddu.clone(),
            tail_c: self.tail_c,
            extrapolations: AtomicU64::new(self.extrapolations.load(Ordering::Relaxed)),
        }
    }
}

impl PartialEq for RadialProfile {
    fn eq(&self, o: &Self) -> bool {
        self.n == o.n && self.p == o.p && self.q == o.q && self.r == o.r && self.u == o.u && self.du == o.du && self.tail_c == o.tail_c
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DecayReport {
    pub exponent_u: LinearFit,
    pub exponent_du: LinearFit,
    pub tail_c: f64,
    /// `min u(r)(1+r)^{N-2}` over the grid.
    pub a2_est: f64,
    /// `max u(r)(1+r)^{N-2}` over the grid.
    pub a3_est: f64,
}

#[inline]
fn quintic(t: f64, h: f64, y0: [f64; 3], y1: [f64; 3]) -> f64 {
    let (t2, t3) = (t * t, t * t * t);
    let (t4, t5) = (t3 * t, t3 * t2);
    y0[0] * (1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5)
        + h * y0[1] * (t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5)
        + h * h * y0[2] * 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5)
        + y1[0] * (10.0 * t3 - 15.0 * t4 + 6.0 * t5)
        + h * y1[1] * (-4.0 * t3 + 7.0 * t4 - 3.0 * t5)
        + h * h * y1[2] * 0.5 * (t3 - 2.0 * t4 + t5)
}

impl RadialProfile {
    /// Build a profile from stored samples; higher derivatives are taken
    /// from the ODE itself.
    pub fn from_samples(spec: &NonlinearitySpec, r: Vec<f64>, u: Vec<f64>, du: Vec<f64>, tail_c: f64) -> Result<Self> {
        if r.len() != u.len() || r.len() != du.len() {
            return Err(Error::InvalidParameter { name: "profile", value: r.len() as f64, reason: "column lengths differ" });
        }
        if r.len() < 4 {
            return Err(Error::InsufficientData { what: "profile nodes", needed: 4, got: r.len() });
        }
        if r[0] != 0.0 || r.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter { name: "r", value: r[0], reason: "radii must start at 0 and increase strictly" });
        }
        if !(tail_c.is_finite()) || u.iter().chain(&du).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { what: "profile sample", value: tail_c });
        }
        let n = spec.dimension();
        let nm1 = n as f64 - 1.0;
        let mut ddu = Vec::with_capacity(r.len());
        let mut dddu = Vec::with_capacity(r.len());
        for i in 0..r.len() {
            if r[i] == 0.0 {
                ddu.push(-spec.f(u[i]) / n as f64);
                dddu.push(0.0);
            } else {
                let d2 = -nm1 / r[i] * du[i] - spec.f(u[i]);
                ddu.push(d2);
                dddu.push(-nm1 / r[i] * d2 + nm1 / (r[i] * r[i]) * du[i] - spec.df(u[i]) * du[i]);
            }
        }
        Ok(Self { n, p: spec.p(), q: spec.q(), r, u, du, ddu, dddu, tail_c, extrapolations: AtomicU64::new(0) })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn exponents(&self) -> (f64, f64) {
        (self.p, self.q)
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn du(&self) -> &[f64] {
        &self.du
    }

    pub fn amplitude(&self) -> f64 {
        self.u[0]
    }

    pub fn tail_c(&self) -> f64 {
        self.tail_c
    }

    pub fn r_max(&self) -> f64 {
        self.r[self.r.len() - 1]
    }

    /// Number of evaluations that fell beyond `r_max`.
    pub fn extrapolations(&self) -> u64 {
        self.extrapolations.load(Ordering::Relaxed)
    }

    fn locate(&self, s: f64) -> usize {
        let i = self.r.partition_point(|&x| x <= s);
        i.saturating_sub(1).min(self.r.len() - 2)
    }

    /// `ω(s)` for `s ≥ 0`.
    pub fn value(&self, s: f64) -> f64 {
        let s = abs(s);
        let last = self.r.len() - 1;
        if s >= self.r[last] {
            if s == self.r[last] {
                return self.u[last];
            }
            self.extrapolations.fetch_add(1, Ordering::Relaxed);
            return self.tail_c * pow(s, 2.0 - self.n as f64);
        }
        let i = self.locate(s);
        let h = self.r[i + 1] - self.r[i];
        let t = (s - self.r[i]) / h;
        quintic(t, h, [self.u[i], self.du[i], self.ddu[i]], [self.u[i + 1], self.du[i + 1], self.ddu[i + 1]])
    }

    /// `ω'(s)` for `s ≥ 0`.
    pub fn derivative(&self, s: f64) -> f64 {
        let s = abs(s);
        let last = self.r.len() - 1;
        if s >= self.r[last] {
            if s == self.r[last] {
                return self.du[last];
            }
            self.extrapolations.fetch_add(1, Ordering::Relaxed);
            let nm2 = self.n as f64 - 2.0;
            return -nm2 * self.tail_c * pow(s, 1.0 - self.n as f64);
        }
        let i = self.locate(s);
        let h = self.r[i + 1] - self.r[i];
        let t = (s - self.r[i]) / h;
        quintic(t, h, [self.du[i], self.ddu[i], self.dddu[i]], [self.du[i + 1], self.ddu[i + 1], self.dddu[i + 1]])
    }

    /// `(ω(s), ω'(s))` with one lookup.
    pub fn value_and_derivative(&self, s: f64) -> (f64, f64) {
        let s = abs(s);
        let last = self.r.len() - 1;
        if s >= self.r[last] {
            return (self.value(s), self.derivative(s));
        }
        let i = self.locate(s);
        let h = self.r[i + 1] - self.r[i];
        let t = (s - self.r[i]) / h;
        (
            quintic(t, h, [self.u[i], self.du[i], self.ddu[i]], [self.u[i + 1], self.du[i + 1], self.ddu[i + 1]]),
            quintic(t, h, [self.du[i], self.ddu[i], self.dddu[i]], [self.du[i + 1], self.ddu[i + 1], self.dddu[i + 1]]),
        )
    }

    /// `ω(|x - center|)`.
    pub fn profile_value(&self, x: &[f64], center: &[f64]) -> f64 {
        self.value(crate::geometry::distance(x, center))
    }

    /// Largest `|u'' + (N-1)/r u' + f(u)|` over interior nodes, with both
    /// derivatives from 5-point finite differences of the stored `u`,
    /// relative to `max |f(u)|`.
    pub fn max_ode_residual(&self, spec: &NonlinearitySpec) -> f64 {
        let nm1 = self.n as f64 - 1.0;
        let fmax = self.u.iter().map(|&u| abs(spec.f(u))).fold(0.0, f64::max);
        let mut worst: f64 = 0.0;
        for i in 2..self.r.len() - 2 {
            let x = &self.r[i - 2..i + 3];
            let w = fornberg(self.r[i], x, 2);
            let (mut d1, mut d2) = (0.0, 0.0);
            for (j, &u) in self.u[i - 2..i + 3].iter().enumerate() {
                d1 += w[1][j] * u;
                d2 += w[2][j] * u;
            }
            let res = d2 + nm1 / self.r[i] * d1 + spec.f(self.u[i]);
            worst = worst.max(abs(res));
        }
        worst / fmax
    }

    /// `∫ |∇ω|²`.
    pub fn gradient_sq(&self) -> Result<Estimate> {
        radial_integral(|r| {
            let d = self.derivative(r);
            d * d
        }, self.r_max(), self.n)
    }

    /// `∫ f(ω) ω`.
    pub fn fu_integral(&self, spec: &NonlinearitySpec) -> Result<Estimate> {
        radial_integral(|r| {
            let u = self.value(r);
            spec.f(u) * u
        }, self.r_max(), self.n)
    }

    /// `∫ F(ω)`.
    pub fn primitive_integral(&self, spec: &NonlinearitySpec) -> Result<Estimate> {
        radial_integral(|r| spec.primitive(self.value(r)), self.r_max(), self.n)
    }

    /// `∫ ω^{2*}`.
    pub fn critical_mass(&self) -> Result<Estimate> {
        let e = crate::math::critical_exponent(self.n);
        radial_integral(|r| pow(self.value(r), e), self.r_max(), self.n)
    }
}

/// Finite-difference weights for derivatives `0..=m` at `z` on nodes `x`.
fn fornberg(z: f64, x: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut c = alloc::vec![alloc::vec![0.0; n]; m + 1];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Log–log regressions of `u` and `|u'|` over the last decade of the grid,
/// and the envelope constants of `u(r)(1+r)^{N-2}`.
pub fn decay_report(profile: &RadialProfile) -> Result<DecayReport> {
    let r_max = profile.r_max();
    let nm2 = profile.n as f64 - 2.0;
    let mut rs = Vec::new();
    let mut us = Vec::new();
    let mut dus = Vec::new();
    for i in 0..profile.r.len() {
        if profile.r[i] >= 0.1 * r_max {
            rs.push(profile.r[i]);
            us.push(profile.u[i]);
            dus.push(abs(profile.du[i]));
        }
    }
    if rs.len() < 20 {
        return Err(Error::InsufficientData { what: "decay regression samples", needed: 20, got: rs.len() });
    }
    let exponent_u = log_log_fit(&rs, &us)?;
    let exponent_du = log_log_fit(&rs, &dus)?;
    let env: Vec<f64> = profile.r.iter().zip(&profile.u).map(|(r, u)| u * pow(1.0 + r, nm2)).collect();
    let a2_est = env.iter().cloned().fold(f64::INFINITY, f64::min);
    let a3_est = env.iter().cloned().fold(0.0, f64::max);
    Ok(DecayReport { exponent_u, exponent_du, tail_c: profile.tail_c, a2_est, a3_est })
}

/// Linear fit of `r^{N-2} u` against `r^{-(N-2)}` on the last decade; the
/// slope measures how far the tail still is from its limit.
pub fn tail_convergence(profile: &RadialProfile) -> Result<LinearFit> {
    let r_max = profile.r_max();
    let nm2 = profile.n as f64 - 2.0;
    let (xs, ys): (Vec<f64>, Vec<f64>) = profile
        .r
        .iter()
        .zip(&profile.u)
        .filter(|(r, _)| **r >= 0.1 * r_max)
        .map(|(r, u)| (pow(*r, -nm2), pow(*r, nm2) * u))
        .unzip();
    linear_fit(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    fn profile() -> &'static RadialProfile {
        static P: OnceLock<RadialProfile> = OnceLock::new();
        P.get_or_init(|| ground_state(&NonlinearitySpec::model(), &StepControl::default()).unwrap())
    }

    #[test]
    fn series_start_curvature() {
        let spec = NonlinearitySpec::model();
        let a = 1.3;
        let (r0, u0, _) = series_start(&spec, a);
        let curv = 2.0 * (u0 - a) / (r0 * r0);
        assert!((curv + spec.f(a) / 3.0).abs() < 1e-5);
    }

    #[test]
    fn tiny_amplitude_is_not_fast() {
        let (_, c) = shoot(&NonlinearitySpec::model(), 1e-6, &StepControl::default()).unwrap();
        assert_ne!(c.kind, ShotKind::FastCandidate);
    }

    #[test]
    fn fornberg_second_derivative_of_cubic() {
        let x = [0.0, 0.3, 0.7, 1.2, 2.0];
        let w = fornberg(0.7, &x, 2);
        let d2: f64 = x.iter().zip(&w[2]).map(|(x, w)| w * x * x * x).sum();
        assert!((d2 - 6.0 * 0.7).abs() < 1e-10);
    }

    #[test]
    fn ground_state_shape() {
        let p = profile();
        assert!((p.amplitude() - 1.597_288_878).abs() < 1e-6, "{}", p.amplitude());
        assert!(p.u().iter().all(|&u| u > 0.0));
        assert!(p.u().windows(2).all(|w| w[1] < w[0]));
        assert_eq!(p.du()[0], 0.0);
        assert!(p.du().iter().all(|&d| d <= 0.0));
        assert!((p.tail_c() - 1.465_408_6).abs() < 1e-5, "{}", p.tail_c());
    }

    #[test]
    fn interpolation_hits_nodes_and_extrapolates() {
        let p = profile();
        for i in [0, 1, 7, 100, p.r().len() - 1] {
            assert_eq!(p.value(p.r()[i]), p.u()[i]);
        }
        let before = p.extrapolations();
        let s = 2.0 * p.r_max();
        let v = p.value(s);
        assert!((v - p.tail_c() / s).abs() <= 1e-12 * v);
        assert!(p.extrapolations() > before);
    }

    #[test]
    fn residual_is_small() {
        let res = profile().max_ode_residual(&NonlinearitySpec::model());
        assert!(res < 1e-6, "{res}");
    }
}
