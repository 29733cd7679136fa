//! Interaction asymptotics, mean-value bounds, the two-bump energy landscape
//! and the barycenter map.
//!
//! Every scan is split into a per-row function and a report function so a
//! caller can evaluate rows in parallel and assemble them in input order.

use alloc::string::String;
use alloc::vec::Vec;

use crate::energy::{EnergyContext, SuperpositionState};
use crate::error::{Error, Result};
use crate::geometry::{distance, scale, Axis};
use crate::math::{abs, log_log_fit, pow, LinearFit};
use crate::nonlinearity::NonlinearitySpec;
use crate::potential::PotentialSpec;
use crate::quadrature::monte_carlo::{self, McOptions};
use crate::quadrature::{
    three_center_integral, two_center_integral, AxisPoint, AxisRule, CenterIntegral, QuadratureConfig, QuadratureMethod,
};
use crate::radial_ode::RadialProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ScanKind {
    Epsilon,
    MeanValue,
    VPlusInteraction,
    TwoCenterPower,
    ThreeCenterPower,
    Projection,
    Landscape,
}

/// One evaluated grid point. Fields that do not apply to a scan are `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScanRow {
    pub r: f64,
    pub lambda: Option<f64>,
    pub s: Option<f64>,
    pub t: Option<f64>,
    /// The scanned quantity: `ε_R`, `D(s,R)`, an interaction integral or `I_V`.
    pub value: f64,
    /// Scan-specific companion: `ε_R R^{N-2}`, `D/(|s-1| ε_R)` or `J_V`.
    pub aux: Option<f64>,
    pub error: f64,
    pub seed: Option<u64>,
    pub flagged: bool,
}

impl ScanRow {
    fn at(r: f64, value: f64, error: f64) -> Self {
        Self { r, lambda: None, s: None, t: None, value, aux: None, error, seed: None, flagged: false }
    }

    fn from_integral(r: f64, ci: &CenterIntegral) -> Self {
        Self { seed: ci.seed, flagged: ci.flagged, ..Self::at(r, ci.value, ci.error) }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NamedFit {
    pub name: String,
    pub fit: LinearFit,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Margin {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScanReport {
    pub kind: ScanKind,
    pub dimension: usize,
    pub y0: Vec<f64>,
    pub y: Vec<f64>,
    pub rows: Vec<ScanRow>,
    pub fits: Vec<NamedFit>,
    pub margins: Vec<Margin>,
}

impl ScanReport {
    fn new(kind: ScanKind, dimension: usize, y0: &[f64], y: &[f64], rows: Vec<ScanRow>) -> Self {
        Self { kind, dimension, y0: y0.to_vec(), y: y.to_vec(), rows, fits: Vec::new(), margins: Vec::new() }
    }

    pub fn fit(&self, name: &str) -> Option<&LinearFit> {
        self.fits.iter().find(|f| f.name == name).map(|f| &f.fit)
    }

    pub fn margin(&self, name: &str) -> Option<f64> {
        self.margins.iter().find(|m| m.name == name).map(|m| m.value)
    }

    pub fn flagged(&self) -> bool {
        self.rows.iter().any(|r| r.flagged)
    }

    fn push_fit(&mut self, name: &str, fit: LinearFit) {
        self.fits.push(NamedFit { name: String::from(name), fit });
    }

    fn push_margin(&mut self, name: &str, value: f64) {
        self.margins.push(Margin { name: String::from(name), value });
    }
}

/// Log–log slope of `value` against `R`, after checking the sample covers
/// at least five points over three octaves.
pub fn fit_decay(rows: &[ScanRow]) -> Result<LinearFit> {
    let rs: Vec<f64> = rows.iter().map(|r| r.r).collect();
    check_fit_grid(&rs)?;
    let vs: Vec<f64> = rows.iter().map(|r| r.value).collect();
    log_log_fit(&rs, &vs)
}

fn check_fit_grid(rs: &[f64]) -> Result<()> {
    if rs.len() < 5 {
        return Err(Error::InsufficientData { what: "decay fit samples", needed: 5, got: rs.len() });
    }
    let lo = rs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = rs.iter().copied().fold(0.0, f64::max);
    if !(lo > 0.0 && hi >= 8.0 * lo * (1.0 - 1e-12)) {
        return Err(Error::InvalidParameter { name: "R grid", value: hi / lo, reason: "fit needs a span of three octaves" });
    }
    Ok(())
}

fn check_anchors(n: usize, y0: &[f64], y: &[f64]) -> Result<()> {
    if y0.len() != n || y.len() != n {
        return Err(Error::InvalidParameter { name: "y", value: y.len() as f64, reason: "anchors must lie in R^N" });
    }
    if abs(crate::geometry::norm(y0) - 1.0) > 1e-12 || abs(distance(y, y0) - 2.0) > 1e-9 {
        return Err(Error::InvalidParameter {
            name: "y",
            value: distance(y, y0),
            reason: "need |y0| = 1 and |y - y0| = 2",
        });
    }
    Ok(())
}

/// `ε_R = ∫ f(ω₀^R) ω_y^R`.
pub fn epsilon_row(
    spec: &NonlinearitySpec,
    profile: &RadialProfile,
    r: f64,
    y0: &[f64],
    y: &[f64],
    cfg: &QuadratureConfig,
) -> Result<ScanRow> {
    check_anchors(profile.dimension(), y0, y)?;
    let ci = two_center_integral(
        |a, b| spec.f(profile.value(a)) * profile.value(b),
        &scale(r, y0),
        &scale(r, y),
        cfg,
    )?;
    let k = pow(r, profile.dimension() as f64 - 2.0);
    Ok(ScanRow { aux: Some(ci.value * k), ..ScanRow::from_integral(r, &ci) })
}

/// Slope fit `"epsilon"` and envelope margins `C4 = min ε_R R^{N-2}`,
/// `C3 = max ε_R R^{N-2}`.
pub fn epsilon_report(n: usize, y0: &[f64], y: &[f64], rows: Vec<ScanRow>) -> Result<ScanReport> {
    if let Some(bad) = rows.iter().find(|r| !(r.value > 0.0)) {
        return Err(Error::ConsistencyFailure { what: "interaction must be positive", primary: bad.value, oracle: 0.0, tolerance: 0.0 });
    }
    let fit = fit_decay(&rows)?;
    let scaled = rows.iter().filter_map(|r| r.aux);
    let (c4, c3) = scaled.fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let mut report = ScanReport::new(ScanKind::Epsilon, n, y0, y, rows);
    report.push_fit("epsilon", fit);
    report.push_margin("C4", c4);
    report.push_margin("C3", c3);
    Ok(report)
}

pub fn epsilon_scan(
    spec: &NonlinearitySpec,
    profile: &RadialProfile,
    r_grid: &[f64],
    y0: &[f64],
    y: &[f64],
    cfg: &QuadratureConfig,
) -> Result<ScanReport> {
    let rows = r_grid.iter().map(|&r| epsilon_row(spec, profile, r, y0, y, cfg)).collect::<Result<Vec<_>>>()?;
    epsilon_report(profile.dimension(), y0, y, rows)
}

/// `D(s,R) = |∫(s f(ω₀^R) − f(s ω₀^R)) ω_y^R|` for every `s`, with
/// `aux = D / (|s−1| ε_R)` for `s ≠ 1`.
#[allow(clippy::too_many_arguments)]
pub fn tvm_rows(
    spec: &NonlinearitySpec,
    profile: &RadialProfile,
    b: f64,
    s_grid: &[f64],
    r: f64,
    y0: &[f64],
    y: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Vec<ScanRow>> {
    if !(b > 1.0) {
        return Err(Error::InvalidParameter { name: "b", value: b, reason: "must exceed 1" });
    }
    if let Some(&s) = s_grid.iter().find(|&&s| !(0.0..=b).contains(&s)) {
        return Err(Error::InvalidParameter { name: "s", value: s, reason: "must lie in [0, b]" });
    }
    let eps = epsilon_row(spec, profile, r, y0, y, cfg)?;
    let (c0, cy) = (scale(r, y0), scale(r, y));
    let mut rows = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        let ci = two_center_integral(
            |a, bb| {
                let w = profile.value(a);
                (s * spec.f(w) - spec.f(s * w)) * profile.value(bb)
            },
            &c0,
            &cy,
            cfg,
        )?;
        let d = abs(ci.value);
        let aux = if s == 1.0 { None } else { Some(d / (abs(s - 1.0) * eps.value)) };
        rows.push(ScanRow {
            s: Some(s),
            aux,
            value: d,
            error: ci.error + eps.error,
            flagged: ci.flagged || eps.flagged,
            ..ScanRow::from_integral(r, &ci)
        });
    }
    Ok(rows)
}

/// Margins `C_b@R` per radius, `C_b_est` (the maximum), `C_b_spread`
/// (`(max − min)/max` over the per-radius constants) and `D_at_1` (largest
/// `D(1,R)`, which should vanish).
pub fn tvm_report(n: usize, y0: &[f64], y: &[f64], rows: Vec<ScanRow>) -> Result<ScanReport> {
    let mut per_r: Vec<(f64, f64)> = Vec::new();
    let mut d1: f64 = 0.0;
    for row in &rows {
        if row.s == Some(1.0) {
            d1 = d1.max(row.value);
        }
        let Some(c) = row.aux else { continue };
        if !c.is_finite() {
            return Err(Error::NonFinite { what: "mean-value ratio", value: c });
        }
        match per_r.iter_mut().find(|(r, _)| *r == row.r) {
            Some(e) => e.1 = e.1.max(c),
            None => per_r.push((row.r, c)),
        }
    }
    if per_r.is_empty() {
        return Err(Error::InsufficientData { what: "mean-value rows with s != 1", needed: 1, got: 0 });
    }
    let hi = per_r.iter().map(|e| e.1).fold(0.0, f64::max);
    let lo = per_r.iter().map(|e| e.1).fold(f64::INFINITY, f64::min);
    let mut report = ScanReport::new(ScanKind::MeanValue, n, y0, y, rows);
    for (r, c) in &per_r {
        report.push_margin(&alloc::format!("C_b@{r}"), *c);
    }
    report.push_margin("C_b_est", hi);
    report.push_margin("C_b_spread", (hi - lo) / hi);
    report.push_margin("D_at_1", d1);
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
pub fn tvm_check(
    spec: &NonlinearitySpec,
    profile: &RadialProfile,
    b: f64,
    s_grid: &[f64],
    r_grid: &[f64],
    y0: &[f64],
    y: &[f64],
    cfg: &QuadratureConfig,
) -> Result<ScanReport> {
    let mut rows = Vec::new();
    for &r in r_grid {
        rows.extend(tvm_rows(spec, profile, b, s_grid, r, y0, y, cfg)?);
    }
    tvm_report(profile.dimension(), y0, y, rows)
}

/// `τ = min{κ, 2(N−2), κ+N−4}`.
pub fn vplus_exponent(kappa: f64, n: usize) -> f64 {
    let n = n as f64;
    kappa.min(2.0 * (n - 2.0)).min(kappa + n - 4.0)
}

/// `∫ V⁺ (ω₀^R + ω_y^R)²`.
pub fn vplus_row(
    profile: &RadialProfile,
    potential: &PotentialSpec,
    r: f64,
    y0: &[f64],
    y: &[f64],
    cfg: &QuadratureConfig,
) -> Result<ScanRow> {
    check_anchors(profile.dimension(), y0, y)?;
    if potential.is_zero() {
        return Ok(ScanRow::at(r, 0.0, 0.0));
    }
    let ci = three_center_integral(
        |c, a, b| {
            let w = profile.value(a) + profile.value(b);
            potential.positive_part(c) * w * w
        },
        potential.center(),
        &scale(r, y0),
        &scale(r, y),
        cfg,
    )?;
    Ok(ScanRow::from_integral(r, &ci))
}

/// Slope fit `"vplus"` plus margins `tau` and `slope_excess`
/// (`−slope − (N−2)`). An identically zero potential gives no fit.
pub fn vplus_report(n: usize, kappa: f64, y0: &[f64], y: &[f64], rows: Vec<ScanRow>) -> Result<ScanReport> {
    let zero = rows.iter().all(|r| r.value == 0.0);
    let fit = if zero { None } else { Some(fit_decay(&rows)?) };
    let mut report = ScanReport::new(ScanKind::VPlusInteraction, n, y0, y, rows);
    report.push_margin("tau", vplus_exponent(kappa, n));
    if let Some(fit) = fit {
        report.push_margin("slope_excess", -fit.slope - (n as f64 - 2.0));
        report.push_fit("vplus", fit);
    }
    Ok(report)
}

pub fn vplus_interaction_scan(
    profile: &RadialProfile,
    potential: &PotentialSpec,
    r_grid: &[f64],
    y0: &[f64],
    y: &[f64],
    cfg: &QuadratureConfig,
) -> Result<ScanReport> {
    let rows = r_grid.iter().map(|&r| vplus_row(profile, potential, r, y0, y, cfg)).collect::<Result<Vec<_>>>()?;
    vplus_report(profile.dimension(), potential.kappa(), y0, y, rows)
}

/// `∫ (1+|x−Ry₀|)^{−α} (1+|x−Ry|)^{−β}` for each `R`, with slope fit
/// `"power"` and margin `mu = min{α, β, α+β−N}`.
pub fn two_center_power_scan(
    alpha: f64,
    beta: f64,
    r_grid: &[f64],
    y0: &[f64],
    y: &[f64],
    cfg: &QuadratureConfig,
) -> Result<ScanReport> {
    let n = y0.len();
    check_anchors(n, y0, y)?;
    let mut rows = Vec::with_capacity(r_grid.len());
    for &r in r_grid {
        let ci = two_center_integral(|a, b| pow(1.0 + a, -alpha) * pow(1.0 + b, -beta), &scale(r, y0), &scale(r, y), cfg)?;
        rows.push(ScanRow::from_integral(r, &ci));
    }
    let fit = fit_decay(&rows)?;
    let mut report = ScanReport::new(ScanKind::TwoCenterPower, n, y0, y, rows);
    report.push_fit("power", fit);
    report.push_margin("mu", alpha.min(beta).min(alpha + beta - n as f64));
    Ok(report)
}

/// `∫ (1+|x|)^{−κ} (1+|x−Ry₀|)^{−γ} (1+|x−Ry|)^{−γ}` for each `R`, with
/// slope fit `"power"` and margin `tau = min{κ, 2γ, κ+2γ−N}`.
pub fn three_center_power_scan(
    kappa: f64,
    gamma: f64,
    r_grid: &[f64],
    y0: &[f64],
    y: &[f64],
    cfg: &QuadratureConfig,
) -> Result<ScanReport> {
    let n = y0.len();
    check_anchors(n, y0, y)?;
    let origin = alloc::vec![0.0; n];
    let mut rows = Vec::with_capacity(r_grid.len());
    for &r in r_grid {
        let ci = three_center_integral(
            |c, a, b| pow(1.0 + c, -kappa) * pow((1.0 + a) * (1.0 + b), -gamma),
            &origin,
            &scale(r, y0),
            &scale(r, y),
            cfg,
        )?;
        rows.push(ScanRow::from_integral(r, &ci));
    }
    let fit = fit_decay(&rows)?;
    let mut report = ScanReport::new(ScanKind::ThreeCenterPower, n, y0, y, rows);
    report.push_fit("power", fit);
    report.push_margin("tau", kappa.min(2.0 * gamma).min(kappa + 2.0 * gamma - n as f64));
    Ok(report)
}

/// Nehari projection and projected energy of `z_{λ,y}^R`.
pub fn projection_row(ctx: &EnergyContext, lambda: f64, r: f64, y0: &[f64], y: &[f64]) -> Result<ScanRow> {
    let state = SuperpositionState::new(ctx.profile, lambda, y0, y, r, 1.0)?;
    let geom = ctx.pair_geometry(&state)?;
    let t = ctx.nehari_project_on(&geom, lambda, 1.0)?;
    let e = ctx.energy_on(&geom, lambda, t)?;
    Ok(ScanRow {
        r,
        lambda: Some(lambda),
        s: None,
        t: Some(t),
        value: e.i_v,
        aux: Some(e.j_v),
        error: e.error,
        seed: geom.seed,
        flagged: e.flagged,
    })
}

/// Margins `T_last` (projection at the largest `R`), `T_gap` (`|T_last −
/// 2|/2`) and `monotone` (1 when `T` increases along increasing `R`).
pub fn projection_report(n: usize, y0: &[f64], y: &[f64], rows: Vec<ScanRow>) -> Result<ScanReport> {
    let mut sorted: Vec<&ScanRow> = rows.iter().collect();
    sorted.sort_by(|a, b| a.r.total_cmp(&b.r));
    let ts: Vec<f64> = sorted.iter().filter_map(|r| r.t).collect();
    let Some(&last) = ts.last() else {
        return Err(Error::InsufficientData { what: "projection rows", needed: 1, got: 0 });
    };
    let monotone = ts.windows(2).all(|w| w[1] > w[0]);
    let mut report = ScanReport::new(ScanKind::Projection, n, y0, y, rows);
    report.push_margin("T_last", last);
    report.push_margin("T_gap", abs(last - 2.0) / 2.0);
    report.push_margin("monotone", if monotone { 1.0 } else { 0.0 });
    Ok(report)
}

/// `T_{λ,y}^R` against `R` at fixed `λ`.
pub fn projection_scan(ctx: &EnergyContext, lambda: f64, r_grid: &[f64], y0: &[f64], y: &[f64]) -> Result<ScanReport> {
    let rows = r_grid.iter().map(|&r| projection_row(ctx, lambda, r, y0, y)).collect::<Result<Vec<_>>>()?;
    projection_report(ctx.profile.dimension(), y0, y, rows)
}

/// `λ ↦ I_V(T_{λ,y}^R z_{λ,y}^R)` on `lambda_grid` at one `R`. The grid must
/// hold `0`, `1/2` and `1` and at least 21 points.
pub fn landscape_rows(ctx: &EnergyContext, r: f64, lambda_grid: &[f64], y0: &[f64], y: &[f64]) -> Result<Vec<ScanRow>> {
    check_lambda_grid(lambda_grid)?;
    let state = SuperpositionState::new(ctx.profile, 0.5, y0, y, r, 1.0)?;
    let geom = ctx.pair_geometry(&state)?;
    let mut rows = Vec::with_capacity(lambda_grid.len());
    for &lambda in lambda_grid {
        let t = ctx.nehari_project_on(&geom, lambda, 1.0)?;
        let e = ctx.energy_on(&geom, lambda, t)?;
        rows.push(ScanRow {
            r,
            lambda: Some(lambda),
            s: None,
            t: Some(t),
            value: e.i_v,
            aux: Some(e.j_v),
            error: e.error,
            seed: geom.seed,
            flagged: e.flagged,
        });
    }
    Ok(rows)
}

fn check_lambda_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 21 {
        return Err(Error::InsufficientData { what: "lambda grid", needed: 21, got: grid.len() });
    }
    for must in [0.0, 0.5, 1.0] {
        if !grid.iter().any(|&l| abs(l - must) < 1e-12) {
            return Err(Error::InvalidParameter { name: "lambda grid", value: must, reason: "grid must contain 0, 1/2 and 1" });
        }
    }
    if let Some(&l) = grid.iter().find(|&&l| !(0.0..=1.0).contains(&l)) {
        return Err(Error::InvalidParameter { name: "lambda", value: l, reason: "must lie in [0, 1]" });
    }
    Ok(())
}

/// Margins `max`, `argmax_lambda`, `eta` (`2c₀ − max`), `eta_rel`
/// (`eta / c₀`), `I_at_0`, `I_at_1`, `T_half` and `interior` (1 when the
/// argmax lies strictly inside `(0, 1)`).
pub fn landscape_report(n: usize, c0: f64, y0: &[f64], y: &[f64], rows: Vec<ScanRow>) -> Result<ScanReport> {
    let at = |l: f64| rows.iter().find(|r| r.lambda.is_some_and(|x| abs(x - l) < 1e-12));
    let (Some(r0), Some(r1), Some(rh)) = (at(0.0), at(1.0), at(0.5)) else {
        return Err(Error::InvalidParameter { name: "lambda grid", value: 0.0, reason: "grid must contain 0, 1/2 and 1" });
    };
    let (i0, i1, th) = (r0.value, r1.value, rh.t.unwrap_or(f64::NAN));
    let best = rows.iter().fold(None::<&ScanRow>, |acc, r| match acc {
        Some(b) if b.value >= r.value => Some(b),
        _ => Some(r),
    });
    let best = best.ok_or(Error::InsufficientData { what: "landscape rows", needed: 1, got: 0 })?;
    let arg = best.lambda.unwrap_or(f64::NAN);
    let mut report = ScanReport::new(ScanKind::Landscape, n, y0, y, rows.clone());
    report.push_margin("max", best.value);
    report.push_margin("argmax_lambda", arg);
    report.push_margin("eta", 2.0 * c0 - best.value);
    report.push_margin("eta_rel", (2.0 * c0 - best.value) / c0);
    report.push_margin("I_at_0", i0);
    report.push_margin("I_at_1", i1);
    report.push_margin("T_half", th);
    report.push_margin("interior", if arg > 0.0 && arg < 1.0 { 1.0 } else { 0.0 });
    Ok(report)
}

pub fn landscape(ctx: &EnergyContext, r: f64, lambda_grid: &[f64], y0: &[f64], y: &[f64]) -> Result<ScanReport> {
    let rows = landscape_rows(ctx, r, lambda_grid, y0, y)?;
    let c0 = ctx.c0()?.c0;
    landscape_report(ctx.profile.dimension(), c0, y0, y, rows)
}

/// `∫ x |u|^{2*} / ∫ |u|^{2*}` for `u = Σ cᵢ ω(· − pᵢ)`.
///
/// Collinear centers are integrated on the axisymmetric rule, where the
/// centroid lies on the axis by symmetry; anything else uses Monte Carlo.
pub fn barycenter_of(profile: &RadialProfile, bumps: &[(f64, &[f64])], cfg: &QuadratureConfig) -> Result<Vec<f64>> {
    let n = profile.dimension();
    let live: Vec<(f64, &[f64])> = bumps.iter().copied().filter(|(c, _)| *c != 0.0).collect();
    if live.is_empty() {
        return Err(Error::ZeroState);
    }
    if let Some((_, p)) = live.iter().find(|(_, p)| p.len() != n) {
        return Err(Error::InvalidParameter { name: "center", value: p.len() as f64, reason: "center must lie in R^N" });
    }
    let expo = 2.0 * n as f64 / (n as f64 - 2.0);
    let centers: Vec<&[f64]> = live.iter().map(|(_, p)| *p).collect();
    let axis = if cfg.method == QuadratureMethod::MonteCarlo { None } else { Axis::through(&centers) };
    match axis {
        Some(axis) => {
            let zs: Vec<f64> = centers.iter().map(|p| axis.coordinate(p)).collect();
            let mut pts: Vec<AxisPoint> = Vec::with_capacity(zs.len());
            for &z in &zs {
                if !pts.iter().any(|p| p.z == z) {
                    pts.push(AxisPoint::new(z, 1.0));
                }
            }
            let weight = |z: f64, rho: f64| {
                let u: f64 = live.iter().zip(&zs).map(|((c, _), zc)| c * profile.value(libm::hypot(z - zc, rho))).sum();
                pow(abs(u), expo)
            };
            let (lo, hi) = zs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &z| (a.min(z), b.max(z)));
            let mid = 0.5 * (lo + hi);
            let len = 0.5 * (hi - lo) + 1.0;
            let (rule, _) = AxisRule::build(&pts, n, 1, cfg, |z, rho, out| {
                out[0] = weight(z, rho) * (1.0 + abs(z - mid) / len);
            })?;
            let mass = rule.integrate(weight);
            let moment = rule.integrate(|z, rho| z * weight(z, rho));
            if !(mass.value > 0.0) {
                return Err(Error::ZeroState);
            }
            Ok(axis.point(moment.value / mass.value))
        }
        None => {
            let opts = McOptions { samples: cfg.mc_samples, seed: cfg.seed, scale: 1.0 };
            let weight = |x: &[f64]| {
                let u: f64 = live.iter().map(|(c, p)| c * profile.profile_value(x, p)).sum();
                pow(abs(u), expo)
            };
            let mass = monte_carlo::integrate(weight, &centers, opts)?;
            if !(mass.value > 0.0) {
                return Err(Error::ZeroState);
            }
            let mut out = Vec::with_capacity(n);
            for k in 0..n {
                let m = monte_carlo::integrate(|x: &[f64]| x[k] * weight(x), &centers, opts)?;
                out.push(m.value / mass.value);
            }
            Ok(out)
        }
    }
}

/// Barycenter of a two-bump state.
pub fn barycenter(state: &SuperpositionState, cfg: &QuadratureConfig) -> Result<Vec<f64>> {
    let (c0, cy) = state.centers();
    let (a, b) = state.coefficients();
    barycenter_of(state.profile, &[(a, &c0), (b, &cy)], cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vplus_exponent_in_three_dimensions() {
        assert_eq!(vplus_exponent(3.0, 3), 2.0);
        assert_eq!(vplus_exponent(2.5, 3), 1.5);
        assert_eq!(vplus_exponent(5.0, 4), 4.0);
    }

    #[test]
    fn fit_grid_needs_three_octaves() {
        assert!(check_fit_grid(&[8.0, 11.0, 16.0, 23.0, 32.0]).is_err());
        assert!(check_fit_grid(&[8.0, 16.0, 32.0, 64.0]).is_err());
        assert!(check_fit_grid(&[8.0, 11.0, 16.0, 32.0, 64.0]).is_ok());
    }

    #[test]
    fn landscape_margins_from_rows() {
        let row = |l: f64, v: f64| ScanRow { lambda: Some(l), t: Some(1.0 + l), ..ScanRow::at(64.0, v, 0.0) };
        let rows = alloc::vec![row(0.0, 1.0), row(0.5, 1.8), row(1.0, 1.1)];
        let rep = landscape_report(3, 1.0, &[1.0, 0.0, 0.0], &[3.0, 0.0, 0.0], rows).unwrap();
        assert_eq!(rep.margin("argmax_lambda"), Some(0.5));
        assert!((rep.margin("eta").unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(rep.margin("T_half"), Some(1.5));
        assert_eq!(rep.margin("interior"), Some(1.0));
    }
}
