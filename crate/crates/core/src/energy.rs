//! Energy `I_V`, Nehari functional `J_V` and Nehari projection on two-bump
//! superpositions `T (λ ω(·-R y₀) + (1-λ) ω(·-R y))`.
//!
//! Every functional is split into single-bump parts, which are 1-D radial
//! integrals of the profile, and interaction parts, which are integrated on
//! one frozen axisymmetric rule per geometry. Profile values, derivatives
//! and the potential are cached at the rule's nodes, so evaluating a new
//! `(λ, T)` costs one pass over the nodes and no re-adaptation.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{distance, norm, scale, Axis};
use crate::math::{abs, exp, ln};
use crate::nonlinearity::NonlinearitySpec;
use crate::potential::PotentialSpec;
use crate::quadrature::{
    three_center_integral, two_center_integral, AxisPoint, AxisRule, Estimate, QuadratureConfig,
    RadialRule, RuleStats,
};
use crate::radial_ode::RadialProfile;
use crate::quadrature::gk::GkOptions;
use crate::roots::{find_root, RootOptions};

/// `T (λ ω(·-R y₀) + (1-λ) ω(·-R y))`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperpositionState<'a> {
    pub profile: &'a RadialProfile,
    pub lambda: f64,
    pub y0: Vec<f64>,
    pub y: Vec<f64>,
    pub r_sep: f64,
    pub t: f64,
}

impl<'a> SuperpositionState<'a> {
    pub fn new(profile: &'a RadialProfile, lambda: f64, y0: &[f64], y: &[f64], r_sep: f64, t: f64) -> Result<Self> {
        let n = profile.dimension();
        if y0.len() != n || y.len() != n {
            return Err(Error::InvalidParameter { name: "y0", value: y0.len() as f64, reason: "anchors must lie in R^N" });
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidParameter { name: "lambda", value: lambda, reason: "must lie in [0, 1]" });
        }
        if abs(norm(y0) - 1.0) > 1e-12 {
            return Err(Error::InvalidParameter { name: "y0", value: norm(y0), reason: "must be a unit vector" });
        }
        if abs(distance(y, y0) - 2.0) > 1e-9 {
            return Err(Error::InvalidParameter { name: "y", value: distance(y, y0), reason: "must satisfy |y - y0| = 2" });
        }
        if !(r_sep >= 1.0 && r_sep.is_finite()) {
            return Err(Error::InvalidParameter { name: "R", value: r_sep, reason: "must be at least 1" });
        }
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter { name: "T", value: t, reason: "must be non-negative" });
        }
        Ok(Self { profile, lambda, y0: y0.to_vec(), y: y.to_vec(), r_sep, t })
    }

    /// The default collinear configuration `y₀ = e₁`, `y = 3e₁`.
    pub fn on_axis(profile: &'a RadialProfile, lambda: f64, r_sep: f64, t: f64) -> Result<Self> {
        let (y0, y) = default_anchors(profile.dimension());
        Self::new(profile, lambda, &y0, &y, r_sep, t)
    }

    pub fn with_t(&self, t: f64) -> Self {
        Self { t, ..self.clone() }
    }

    pub fn centers(&self) -> (Vec<f64>, Vec<f64>) {
        (scale(self.r_sep, &self.y0), scale(self.r_sep, &self.y))
    }

    /// Coefficients `(Tλ, T(1-λ))` of the two bumps.
    pub fn coefficients(&self) -> (f64, f64) {
        (self.t * self.lambda, self.t * (1.0 - self.lambda))
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let (c0, cy) = self.centers();
        let (a, b) = self.coefficients();
        a * self.profile.profile_value(x, &c0) + b * self.profile.profile_value(x, &cy)
    }
}

/// `y₀ = e₁`, `y = 3e₁`.
pub fn default_anchors(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut y0 = alloc::vec![0.0; n];
    y0[0] = 1.0;
    let y = scale(3.0, &y0);
    (y0, y)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnergyReport {
    pub i_v: f64,
    pub j_v: f64,
    pub gradient_sq: f64,
    pub potential_term: f64,
    pub f_term: f64,
    pub fu_term: f64,
    /// Sum of the quadrature error estimates behind the six fields.
    pub error: f64,
    /// Some contribution missed its tolerance or came from Monte Carlo.
    pub flagged: bool,
}

impl EnergyReport {
    fn assemble(gradient_sq: Estimate, potential_term: Estimate, f_term: Estimate, fu_term: Estimate, flagged: bool) -> Self {
        Self {
            i_v: 0.5 * gradient_sq.value + 0.5 * potential_term.value - f_term.value,
            j_v: gradient_sq.value + potential_term.value - fu_term.value,
            gradient_sq: gradient_sq.value,
            potential_term: potential_term.value,
            f_term: f_term.value,
            fu_term: fu_term.value,
            error: gradient_sq.error + potential_term.error + f_term.error + fu_term.error,
            flagged,
        }
    }
}

/// Profile data cached on the nodes of a frozen two-center rule.
#[derive(Debug, Clone)]
struct PairCache {
    rule: AxisRule,
    w0: Vec<f64>,
    wy: Vec<f64>,
    /// `ω'(a) ω'(b) cos∠` with `a, b` the distances to the two centers.
    gdot: Vec<f64>,
    /// Potential at the nodes when its center lies on the axis.
    v: Option<Vec<f64>>,
    stats: RuleStats,
}

/// Everything about a pair of centers that does not depend on `(λ, T)`.
#[derive(Debug, Clone)]
pub struct Geometry {
    pub r_sep: f64,
    pub center0: Vec<f64>,
    pub center_y: Vec<f64>,
    /// `∫ ∇ω₀·∇ω_y`.
    pub cross_gradient: Estimate,
    /// `∫ V ω₀²`, `∫ V ω_y²`, `∫ V ω₀ ω_y`.
    pub v00: Estimate,
    pub vyy: Estimate,
    pub v0y: Estimate,
    pub flagged: bool,
    pub seed: Option<u64>,
    pair: Option<PairCache>,
}

impl Geometry {
    pub fn cells(&self) -> usize {
        self.pair.as_ref().map_or(0, |p| p.stats.cells)
    }
}

/// Fixed inputs shared by all energy evaluations.
#[derive(Debug, Clone)]
pub struct EnergyContext<'a> {
    pub spec: &'a NonlinearitySpec,
    pub profile: &'a RadialProfile,
    pub potential: &'a PotentialSpec,
    pub cfg: QuadratureConfig,
    /// `∫ |∇ω|²`.
    pub gradient: Estimate,
    radial: RadialRule,
    /// `ω` at the nodes of `radial`.
    omega: Vec<f64>,
}

/// `c₀ = I₀(ω)` with its Pohozaev cross-check.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GroundLevel {
    pub c0: f64,
    pub gradient_sq: f64,
    pub f_term: f64,
    pub fu_term: f64,
    /// `(1/N) ∫ |∇ω|²`.
    pub pohozaev: f64,
    /// `|c₀ - pohozaev| / c₀`.
    pub pohozaev_gap: f64,
    /// `|J₀(ω)| / ∫ |∇ω|²`.
    pub nehari_gap: f64,
    /// Pohozaev gap above 1%.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FiberingCurve {
    pub points: Vec<(f64, f64)>,
    pub argmax: f64,
    /// Successive differences change sign exactly once.
    pub unimodal: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LevelEstimate {
    pub value: f64,
    /// `(R, T, I_V)` per grid point.
    pub rows: Vec<(f64, f64, f64)>,
}

impl<'a> EnergyContext<'a> {
    pub fn new(
        spec: &'a NonlinearitySpec,
        profile: &'a RadialProfile,
        potential: &'a PotentialSpec,
        cfg: QuadratureConfig,
    ) -> Result<Self> {
        if spec.dimension() != profile.dimension() || potential.dimension() != profile.dimension() {
            return Err(Error::InvalidParameter {
                name: "N",
                value: potential.dimension() as f64,
                reason: "nonlinearity, profile and potential disagree on the dimension",
            });
        }
        let gradient = profile.gradient_sq()?;
        let reference = |r: f64| {
            let w = profile.value(r);
            [0.5, 1.0, 2.0].iter().map(|&a| spec.f(a * w) * a * w).sum::<f64>()
        };
        let opts = GkOptions { rel_tol: 1e-13, abs_tol: 0.0, max_segments: 8000 };
        let radial = RadialRule::build(reference, profile.r_max(), profile.dimension(), opts)?;
        let omega = radial.nodes().iter().map(|&r| profile.value(r)).collect();
        Ok(Self { spec, profile, potential, cfg, gradient, radial, omega })
    }

    fn dim(&self) -> usize {
        self.profile.dimension()
    }

    /// `∫ F(α ω)`.
    fn primitive_self(&self, alpha: f64) -> Result<Estimate> {
        if alpha == 0.0 {
            return Ok(Estimate::default());
        }
        self.radial.integrate_indexed(|i| self.spec.primitive(alpha * self.omega[i]))
    }

    /// `∫ f(α ω) α ω`.
    fn fu_self(&self, alpha: f64) -> Result<Estimate> {
        if alpha == 0.0 {
            return Ok(Estimate::default());
        }
        self.radial.integrate_indexed(|i| {
            let s = alpha * self.omega[i];
            self.spec.f(s) * s
        })
    }

    /// `∫ V ω(·-c)²`.
    fn potential_self(&self, c: &[f64]) -> Result<(Estimate, bool)> {
        if self.potential.is_zero() {
            return Ok((Estimate::default(), false));
        }
        let w = |b: f64| {
            let v = self.profile.value(b);
            v * v
        };
        let res = two_center_integral(|a, b| self.potential.radial(a) * w(b), self.potential.center(), c, &self.cfg)?;
        Ok((Estimate::new(res.value, res.error), res.flagged))
    }

    /// Precompute the geometry of `state`. The interaction rule is only built
    /// when both bumps are present, so single-bump states stay cheap.
    pub fn geometry(&self, state: &SuperpositionState) -> Result<Geometry> {
        let (c0, cy) = state.centers();
        let need_pair = state.lambda > 0.0 && state.lambda < 1.0;
        self.geometry_for(state.r_sep, c0, cy, need_pair)
    }

    /// Geometry with the interaction rule regardless of `λ`.
    pub fn pair_geometry(&self, state: &SuperpositionState) -> Result<Geometry> {
        let (c0, cy) = state.centers();
        self.geometry_for(state.r_sep, c0, cy, true)
    }

    fn geometry_for(&self, r_sep: f64, c0: Vec<f64>, cy: Vec<f64>, need_pair: bool) -> Result<Geometry> {
        let (v00, f00) = self.potential_self(&c0)?;
        let (vyy, fyy) = self.potential_self(&cy)?;
        let mut flagged = f00 || fyy;
        let mut seed = None;
        let mut v0y = Estimate::default();
        let mut pair = None;
        let mut cross_gradient = Estimate::default();
        if need_pair {
            let vc = self.potential.center();
            let v_on_axis = !self.potential.is_zero() && Axis::through(&[&c0, &cy, vc]).is_some();
            let cache = self.build_pair(&c0, &cy, v_on_axis)?;
            cross_gradient = cache.rule.integrate_indexed(|i, _| cache.gdot[i]);
            if let Some(v) = &cache.v {
                v0y = cache.rule.integrate_indexed(|i, _| v[i] * cache.w0[i] * cache.wy[i]);
            } else if !self.potential.is_zero() {
                let res = three_center_integral(
                    |c, a, b| self.potential.radial(c) * self.profile.value(a) * self.profile.value(b),
                    vc,
                    &c0,
                    &cy,
                    &self.cfg,
                )?;
                v0y = Estimate::new(res.value, res.error);
                flagged |= res.flagged;
                seed = res.seed;
            }
            pair = Some(cache);
        }
        Ok(Geometry { r_sep, center0: c0, center_y: cy, cross_gradient, v00, vyy, v0y, flagged, seed, pair })
    }

    fn build_pair(&self, c0: &[f64], cy: &[f64], with_v: bool) -> Result<PairCache> {
        let axis = Axis::through(&[c0, cy]).ok_or(Error::InvalidParameter {
            name: "centers",
            value: distance(c0, cy),
            reason: "bump centers coincide",
        })?;
        let z0 = axis.coordinate(c0);
        let zy = axis.coordinate(cy);
        let mut points = alloc::vec![AxisPoint::new(z0, 1.0), AxisPoint::new(zy, 1.0)];
        let zv = axis.coordinate(self.potential.center());
        if with_v {
            points.push(AxisPoint::new(zv, self.potential.bump_radius().min(1.0)));
        }
        let spec = self.spec;
        let prof = self.profile;
        let pot = self.potential;
        let node = |z: f64, rho: f64| {
            let a = libm::hypot(z - z0, rho);
            let b = libm::hypot(z - zy, rho);
            let (w0, d0) = prof.value_and_derivative(a);
            let (wy, dy) = prof.value_and_derivative(b);
            let cos = if a > 0.0 && b > 0.0 { ((z - z0) * (z - zy) + rho * rho) / (a * b) } else { 0.0 };
            (w0, wy, d0 * dy * cos)
        };
        let comps = if with_v { 5 } else { 4 };
        let (rule, stats) = AxisRule::build(&points, self.dim(), comps, &self.cfg, |z, rho, out| {
            let (w0, wy, g) = node(z, rho);
            let s = w0 + wy;
            out[0] = spec.f(w0) * wy + spec.f(wy) * w0;
            out[1] = g;
            out[2] = spec.primitive(s) - spec.primitive(w0) - spec.primitive(wy);
            out[3] = spec.f(s) * s - spec.f(w0) * w0 - spec.f(wy) * wy;
            if with_v {
                out[4] = pot.radial(libm::hypot(z - zv, rho)) * w0 * wy;
            }
        })?;
        let nodes = rule.nodes();
        let mut w0 = Vec::with_capacity(nodes.len());
        let mut wy = Vec::with_capacity(nodes.len());
        let mut gdot = Vec::with_capacity(nodes.len());
        let mut v = if with_v { Some(Vec::with_capacity(nodes.len())) } else { None };
        for nd in nodes {
            let (a, b, g) = node(nd.z, nd.rho);
            w0.push(a);
            wy.push(b);
            gdot.push(g);
            if let Some(v) = v.as_mut() {
                v.push(pot.radial(libm::hypot(nd.z - zv, nd.rho)));
            }
        }
        Ok(PairCache { rule, w0, wy, gdot, v, stats })
    }

    /// Energy report of `state` on a geometry built for it.
    pub fn energy_on(&self, geom: &Geometry, lambda: f64, t: f64) -> Result<EnergyReport> {
        if t == 0.0 {
            return Ok(EnergyReport::default());
        }
        let (a, b) = (t * lambda, t * (1.0 - lambda));
        let g = self.gradient;
        let x = geom.cross_gradient;
        let gradient_sq = Estimate::new(
            t * t * ((lambda * lambda + (1.0 - lambda) * (1.0 - lambda)) * g.value) + 2.0 * a * b * x.value,
            t * t * g.error + 2.0 * abs(a * b) * x.error,
        );
        let potential_term = Estimate::new(
            a * a * geom.v00.value + b * b * geom.vyy.value + 2.0 * a * b * geom.v0y.value,
            a * a * geom.v00.error + b * b * geom.vyy.error + 2.0 * abs(a * b) * geom.v0y.error,
        );
        let fa = self.primitive_self(a)?;
        let fb = self.primitive_self(b)?;
        let ua = self.fu_self(a)?;
        let ub = self.fu_self(b)?;
        let (fi, ui) = self.interaction(geom, a, b)?;
        let f_term = Estimate::new(fa.value + fb.value + fi.value, fa.error + fb.error + fi.error);
        let fu_term = Estimate::new(ua.value + ub.value + ui.value, ua.error + ub.error + ui.error);
        Ok(EnergyReport::assemble(gradient_sq, potential_term, f_term, fu_term, geom.flagged))
    }

    /// Interaction parts of `∫F(u)` and `∫f(u)u` for `u = a ω₀ + b ω_y`.
    fn interaction(&self, geom: &Geometry, a: f64, b: f64) -> Result<(Estimate, Estimate)> {
        if a == 0.0 || b == 0.0 {
            return Ok((Estimate::default(), Estimate::default()));
        }
        let Some(pair) = geom.pair.as_ref() else {
            return Err(Error::InvalidParameter { name: "geometry", value: a, reason: "two-bump state needs a pair geometry" });
        };
        let spec = self.spec;
        let fi = pair.rule.integrate_indexed(|i, _| {
            let (p, q) = (a * pair.w0[i], b * pair.wy[i]);
            spec.primitive(p + q) - spec.primitive(p) - spec.primitive(q)
        });
        let ui = self.fu_interaction(pair, a, b);
        Ok((fi, ui))
    }

    fn fu_interaction(&self, pair: &PairCache, a: f64, b: f64) -> Estimate {
        let spec = self.spec;
        pair.rule.integrate_indexed(|i, _| {
            let (p, q) = (a * pair.w0[i], b * pair.wy[i]);
            let s = p + q;
            spec.f(s) * s - spec.f(p) * p - spec.f(q) * q
        })
    }

    /// `J_V(T z) / T²` for the unit-coefficient combination `z`.
    fn nehari_ratio(&self, geom: &Geometry, lambda: f64, t: f64) -> Result<f64> {
        let (a, b) = (t * lambda, t * (1.0 - lambda));
        let mu = 1.0 - lambda;
        let quad = (lambda * lambda + mu * mu) * self.gradient.value
            + 2.0 * lambda * mu * geom.cross_gradient.value
            + lambda * lambda * geom.v00.value
            + mu * mu * geom.vyy.value
            + 2.0 * lambda * mu * geom.v0y.value;
        let mut fu = self.fu_self(a)?.value + self.fu_self(b)?.value;
        if a != 0.0 && b != 0.0 {
            if let Some(pair) = geom.pair.as_ref() {
                fu += self.fu_interaction(pair, a, b).value;
            }
        }
        Ok(quad - fu / (t * t))
    }

    /// The `T > 0` with `J_V(T c z) = 0`, where `c` is the pre-scale stored
    /// in the state. Bracketed on `[1e-6, 1e6]` and refined in `ln T`.
    pub fn nehari_project_on(&self, geom: &Geometry, lambda: f64, prescale: f64) -> Result<f64> {
        if !(prescale > 0.0) {
            return Err(Error::ZeroState);
        }
        let h = |s: f64| self.nehari_ratio(geom, lambda, prescale * exp(s));
        let (lo, hi) = (ln(1e-6), ln(1e6));
        let (h_lo, h_hi) = (h(lo)?, h(hi)?);
        if !(h_lo > 0.0 && h_hi < 0.0) {
            return Err(Error::ProjectionFailure { t_lo: 1e-6, j_lo: h_lo, t_hi: 1e6, j_hi: h_hi });
        }
        // Walk out from T = c by factors of two to a narrow bracket.
        let (mut a, mut b) = (0.0f64.clamp(lo, hi), 0.0f64.clamp(lo, hi));
        let mut h_a = h(a)?;
        let mut h_b = h_a;
        let step = core::f64::consts::LN_2;
        if h_a > 0.0 {
            while h_b > 0.0 {
                a = b;
                h_a = h_b;
                b = (b + step).min(hi);
                h_b = if b == hi { h_hi } else { h(b)? };
            }
        } else {
            while h_a <= 0.0 && a > lo {
                b = a;
                h_b = h_a;
                a = (a - step).max(lo);
                h_a = if a == lo { h_lo } else { h(a)? };
            }
        }
        let _ = (h_a, h_b);
        let root = find_root(h, a, b, RootOptions { rtol: 0.0, atol: 1e-12, max_iter: 300 })?;
        Ok(exp(root.x))
    }

    pub fn energy(&self, state: &SuperpositionState) -> Result<EnergyReport> {
        let geom = self.geometry(state)?;
        self.energy_on(&geom, state.lambda, state.t)
    }

    pub fn nehari_project(&self, state: &SuperpositionState) -> Result<f64> {
        let geom = self.geometry(state)?;
        self.nehari_project_on(&geom, state.lambda, state.t)
    }

    /// `t ↦ I_V(t u)` with `u = t_star z`; `t_star` is normally the Nehari projection.
    pub fn fibering_curve_on(&self, geom: &Geometry, lambda: f64, t_star: f64, t_grid: &[f64]) -> Result<FiberingCurve> {
        let mut points = Vec::with_capacity(t_grid.len());
        for &t in t_grid {
            points.push((t, self.energy_on(geom, lambda, t * t_star)?.i_v));
        }
        let argmax = points.iter().fold((f64::NAN, f64::NEG_INFINITY), |acc, p| if p.1 > acc.1 { *p } else { acc }).0;
        let mut changes = 0;
        let mut rising = true;
        for w in points.windows(2) {
            let up = w[1].1 > w[0].1;
            if up != rising {
                changes += 1;
                rising = up;
            }
        }
        Ok(FiberingCurve { points, argmax, unimodal: changes == 1 })
    }

    /// `c₀ = I₀(ω)` by radial quadrature, checked against `(1/N)∫|∇ω|²`.
    pub fn c0(&self) -> Result<GroundLevel> {
        ground_level(self.spec, self.profile)
    }

    /// `min_R I_V(T ω_y^R)` over single translated bumps `ω(· - R y)`.
    pub fn cv_upper_estimate(&self, r_grid: &[f64], y0: &[f64], y: &[f64]) -> Result<LevelEstimate> {
        let mut rows = Vec::with_capacity(r_grid.len());
        let mut best = f64::INFINITY;
        for &r in r_grid {
            let state = SuperpositionState::new(self.profile, 0.0, y0, y, r, 1.0)?;
            let geom = self.geometry(&state)?;
            let t = self.nehari_project_on(&geom, 0.0, 1.0)?;
            let e = self.energy_on(&geom, 0.0, t)?;
            best = best.min(e.i_v);
            rows.push((r, t, e.i_v));
        }
        Ok(LevelEstimate { value: best, rows })
    }
}

/// `c₀ = I₀(ω)` and the Nehari and Pohozaev identities of the ground state.
pub fn ground_level(spec: &NonlinearitySpec, profile: &RadialProfile) -> Result<GroundLevel> {
    let g = profile.gradient_sq()?.value;
    let f_term = profile.primitive_integral(spec)?.value;
    let fu_term = profile.fu_integral(spec)?.value;
    let c0 = 0.5 * g - f_term;
    let pohozaev = g / profile.dimension() as f64;
    let pohozaev_gap = abs(c0 - pohozaev) / abs(c0);
    Ok(GroundLevel {
        c0,
        gradient_sq: g,
        f_term,
        fu_term,
        pohozaev,
        pohozaev_gap,
        nehari_gap: abs(g - fu_term) / g,
        flagged: !(pohozaev_gap <= 1e-2),
    })
}

/// One-shot [`EnergyContext::energy`].
pub fn energy(spec: &NonlinearitySpec, state: &SuperpositionState, potential: &PotentialSpec, cfg: &QuadratureConfig) -> Result<EnergyReport> {
    EnergyContext::new(spec, state.profile, potential, *cfg)?.energy(state)
}

/// One-shot [`EnergyContext::nehari_project`].
pub fn nehari_project(spec: &NonlinearitySpec, state: &SuperpositionState, potential: &PotentialSpec, cfg: &QuadratureConfig) -> Result<f64> {
    EnergyContext::new(spec, state.profile, potential, *cfg)?.nehari_project(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial_ode::{ground_state, StepControl};
    use std::sync::OnceLock;

    fn setup() -> &'static (NonlinearitySpec, RadialProfile) {
        static S: OnceLock<(NonlinearitySpec, RadialProfile)> = OnceLock::new();
        S.get_or_init(|| {
            let spec = NonlinearitySpec::model();
            let p = ground_state(&spec, &StepControl::default()).unwrap();
            (spec, p)
        })
    }

    #[test]
    fn ground_state_is_on_nehari_manifold() {
        let (spec, p) = setup();
        let zero = PotentialSpec::zero(3);
        let ctx = EnergyContext::new(spec, p, &zero, QuadratureConfig::default()).unwrap();
        let state = SuperpositionState::on_axis(p, 1.0, 8.0, 1.0).unwrap();
        let e = ctx.energy(&state).unwrap();
        assert!(abs(e.j_v) < 1e-6 * e.gradient_sq, "{e:?}");
        let t = ctx.nehari_project(&state).unwrap();
        assert!(abs(t - 1.0) < 1e-6, "{t}");
        assert_eq!(ctx.energy_on(&ctx.geometry(&state).unwrap(), 1.0, 0.0).unwrap(), EnergyReport::default());
    }

    #[test]
    fn pohozaev_level() {
        let (spec, p) = setup();
        let lvl = ground_level(spec, p).unwrap();
        assert!(lvl.c0 > 0.0);
        assert!(lvl.pohozaev_gap < 1e-6, "{lvl:?}");
        assert!(lvl.nehari_gap < 1e-6, "{lvl:?}");
    }

    #[test]
    fn cross_gradient_equals_interaction() {
        // ∫∇ω₀·∇ω_y = ∫(-Δω₀) ω_y = ∫ f(ω₀) ω_y
        let (spec, p) = setup();
        let zero = PotentialSpec::zero(3);
        let ctx = EnergyContext::new(spec, p, &zero, QuadratureConfig::default()).unwrap();
        let state = SuperpositionState::on_axis(p, 0.5, 8.0, 1.0).unwrap();
        let geom = ctx.geometry(&state).unwrap();
        let (c0, cy) = state.centers();
        let eps = two_center_integral(|a, b| spec.f(p.value(a)) * p.value(b), &c0, &cy, &QuadratureConfig::default()).unwrap();
        assert!(abs(geom.cross_gradient.value - eps.value) < 1e-6 * eps.value, "{:?} vs {eps:?}", geom.cross_gradient);
    }

    #[test]
    fn projection_is_scale_equivariant() {
        let (spec, p) = setup();
        let zero = PotentialSpec::zero(3);
        let ctx = EnergyContext::new(spec, p, &zero, QuadratureConfig::default()).unwrap();
        let state = SuperpositionState::on_axis(p, 0.5, 8.0, 1.0).unwrap();
        let geom = ctx.geometry(&state).unwrap();
        let t1 = ctx.nehari_project_on(&geom, 0.5, 1.0).unwrap();
        for c in [0.5, 2.0, 10.0] {
            let tc = ctx.nehari_project_on(&geom, 0.5, c).unwrap();
            assert!(abs(tc * c - t1) < 1e-10 * t1);
        }
    }
}
