//! Adaptive cubature for axisymmetric integrands.
//!
//! An integrand on ℝ^N that depends only on the axial coordinate `z` and the
//! distance `ρ` to the axis integrates as
//!
//! ```text
//! ∫ g dx = |S^{N-2}| ∫∫ g(z, ρ) ρ^{N-2} dρ dz .
//! ```
//!
//! The meridian half-plane is parametrised by polar coordinates `(r, θ)`
//! about the midpoint of the feature points: a disc `r ≤ L` and the exterior
//! `r = L / s`, `s ∈ (0, 1]`. The exterior map turns the `|x|^{-2(N-1)}`
//! decay of gradient energies into a bounded integrand, so no truncation
//! correction is needed. Cells carry a tensor 15×15 Kronrod rule; the split
//! direction is the one whose embedded Gauss rule disagrees more.

use alloc::vec;
use alloc::vec::Vec;

use super::gk::kronrod_nodes;
use super::{Estimate, QuadratureConfig};
use crate::error::{Error, Result};
use crate::math::{abs, cos, pow, sin, sphere_area, CompensatedSum, PI};

const NODES_PER_CELL: usize = 225;

/// A point on the axis where the integrand has a feature of width `scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisPoint {
    pub z: f64,
    pub scale: f64,
}

impl AxisPoint {
    pub fn new(z: f64, scale: f64) -> Self {
        Self { z, scale }
    }
}

/// Quadrature node in meridian coordinates; weights include the Jacobian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisNode {
    pub z: f64,
    pub rho: f64,
    /// Tensor Kronrod weight.
    pub wk: f64,
    /// Tensor Gauss weight (zero off the embedded 7×7 grid).
    pub wg: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuleStats {
    pub cells: usize,
    pub rounds: usize,
    /// Per-component values of the adaptation integrand.
    pub values: Vec<f64>,
    /// Per-component error estimates.
    pub errors: Vec<f64>,
}

/// A frozen 2-D rule: adapted once, then reused for any integrand with the
/// same feature points.
#[derive(Debug, Clone)]
pub struct AxisRule {
    nodes: Vec<AxisNode>,
    inner_radius: f64,
    center: f64,
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    u0: f64,
    u1: f64,
    t0: f64,
    t1: f64,
    outer: bool,
}

struct CellResult {
    cell: Cell,
    kk: Vec<f64>,
    err_u: Vec<f64>,
    err_t: Vec<f64>,
}

struct Layout {
    center: f64,
    inner: f64,
    sphere: f64,
    n_dim: usize,
}

impl Layout {
    /// Physical coordinates and geometric weight of parameter point `(u, t)`.
    #[inline]
    fn map(&self, outer: bool, u: f64, t: f64) -> (f64, f64, f64) {
        let (r, jac) = if outer { (self.inner / u, self.inner / (u * u)) } else { (u, 1.0) };
        let rho = r * sin(t);
        let z = self.center + r * cos(t);
        let radial = match self.n_dim {
            3 => rho,
            n => pow(rho, (n - 2) as f64),
        };
        (z, rho, self.sphere * radial * r * jac)
    }
}

fn dedup_sorted(v: &mut Vec<f64>, min_gap: f64) {
    v.sort_by(|a, b| a.total_cmp(b));
    let mut out: Vec<f64> = Vec::with_capacity(v.len());
    for &x in v.iter() {
        match out.last() {
            Some(&last) if x - last <= min_gap => {}
            _ => out.push(x),
        }
    }
    // keep the exact right end
    if let (Some(&l), Some(&x)) = (out.last(), v.last()) {
        if l != x {
            let n = out.len();
            out[n - 1] = x;
        }
    }
    *v = out;
}

impl AxisRule {
    /// Adapt a rule to the vector integrand `f(z, ρ, out)` with `n_comp` components.
    pub fn build<F>(
        points: &[AxisPoint],
        n_dim: usize,
        n_comp: usize,
        cfg: &QuadratureConfig,
        mut f: F,
    ) -> Result<(AxisRule, RuleStats)>
    where
        F: FnMut(f64, f64, &mut [f64]),
    {
        if points.is_empty() {
            return Err(Error::InvalidParameter { name: "points", value: 0.0, reason: "need at least one axis point" });
        }
        if n_dim < 3 {
            return Err(Error::InvalidParameter { name: "N", value: n_dim as f64, reason: "dimension must be at least 3" });
        }
        let zmin = points.iter().map(|p| p.z).fold(f64::INFINITY, f64::min);
        let zmax = points.iter().map(|p| p.z).fold(f64::NEG_INFINITY, f64::max);
        let span = zmax - zmin;
        let center = 0.5 * (zmin + zmax);
        let inner = match cfg.box_radius {
            Some(l) => {
                if !(l >= 4.0 * span && l > 0.0) {
                    return Err(Error::InvalidParameter {
                        name: "box_radius",
                        value: l,
                        reason: "must be at least four times the span of the centers",
                    });
                }
                l
            }
            None => (4.0 * span).max(16.0),
        };
        let layout = Layout { center, inner, sphere: sphere_area(n_dim - 1), n_dim };

        // Initial partition.
        let mut us = vec![0.0, inner];
        let mut ts = vec![0.0, 0.5 * PI, PI];
        for p in points {
            let d = abs(p.z - center);
            let s = p.scale.max(1e-6);
            for k in [0.0, 1.0, -1.0, 4.0, -4.0, 16.0, -16.0] {
                let u = d + k * s;
                if u > 0.0 && u < inner {
                    us.push(u);
                }
            }
            if d > 0.0 {
                for k in [1.0, 4.0, 16.0] {
                    let a = k * s / d;
                    if a < 0.4 * PI {
                        ts.push(if p.z >= center { a } else { PI - a });
                    }
                }
            }
        }
        dedup_sorted(&mut us, 1e-9 * inner);
        dedup_sorted(&mut ts, 1e-12);
        let mut cells: Vec<Cell> = Vec::new();
        for uw in us.windows(2) {
            for tw in ts.windows(2) {
                cells.push(Cell { u0: uw[0], u1: uw[1], t0: tw[0], t1: tw[1], outer: false });
            }
        }
        for uw in [0.0, 0.5, 1.0].windows(2) {
            for tw in [0.0, 0.5 * PI, PI].windows(2) {
                cells.push(Cell { u0: uw[0], u1: uw[1], t0: tw[0], t1: tw[1], outer: true });
            }
        }

        let gk = kronrod_nodes();
        let mut scratch = vec![0.0; n_comp];
        let mut eval = |c: Cell| -> CellResult {
            let hu = 0.5 * (c.u1 - c.u0);
            let ht = 0.5 * (c.t1 - c.t0);
            let mu = 0.5 * (c.u1 + c.u0);
            let mt = 0.5 * (c.t1 + c.t0);
            let mut kk = vec![0.0; n_comp];
            let mut gu = vec![0.0; n_comp];
            let mut gt = vec![0.0; n_comp];
            for &(xu, wku, wgu) in gk.iter() {
                let u = mu + hu * xu;
                for &(xt, wkt, wgt) in gk.iter() {
                    let t = mt + ht * xt;
                    let (z, rho, w) = layout.map(c.outer, u, t);
                    for s in scratch.iter_mut() {
                        *s = 0.0;
                    }
                    f(z, rho, &mut scratch);
                    let wh = w * hu * ht;
                    for k in 0..n_comp {
                        let v = scratch[k] * wh;
                        kk[k] += wku * wkt * v;
                        gu[k] += wgu * wkt * v;
                        gt[k] += wku * wgt * v;
                    }
                }
            }
            let err_u = kk.iter().zip(&gu).map(|(a, b)| abs(a - b)).collect();
            let err_t = kk.iter().zip(&gt).map(|(a, b)| abs(a - b)).collect();
            CellResult { cell: c, kk, err_u, err_t }
        };

        let mut results: Vec<CellResult> = cells.into_iter().map(&mut eval).collect();
        let mut rounds = 0usize;
        loop {
            rounds += 1;
            let mut values = vec![0.0; n_comp];
            let mut errors = vec![0.0; n_comp];
            for k in 0..n_comp {
                let mut v = CompensatedSum::new();
                let mut e = 0.0;
                for r in &results {
                    v.add(r.kk[k]);
                    e += r.err_u[k] + r.err_t[k];
                }
                values[k] = v.value();
                errors[k] = e;
            }
            if let Some(k) = values.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { what: "axisymmetric quadrature value", value: values[k] });
            }
            let scales: Vec<f64> = values.iter().map(|v| (cfg.tol * abs(*v)).max(cfg.abs_tol)).collect();
            let converged = errors.iter().zip(&scales).all(|(e, s)| e <= s);
            if converged {
                let rule = Self::freeze(&layout, &results, &gk);
                let stats = RuleStats { cells: results.len(), rounds, values, errors };
                return Ok((rule, stats));
            }
            if results.len() >= cfg.max_cells {
                let (k, _) = errors
                    .iter()
                    .zip(&scales)
                    .map(|(e, s)| e / s)
                    .enumerate()
                    .fold((0, 0.0), |acc, (i, r)| if r > acc.1 { (i, r) } else { acc });
                return Err(Error::ToleranceNotMet { value: values[k], error: errors[k], requested: scales[k] });
            }

            // Normalised cell errors and split selection.
            let norm: Vec<(f64, bool)> = results
                .iter()
                .map(|r| {
                    let mut eu: f64 = 0.0;
                    let mut et: f64 = 0.0;
                    for (k, &sc) in scales.iter().enumerate().take(n_comp) {
                        eu = eu.max(r.err_u[k] / sc);
                        et = et.max(r.err_t[k] / sc);
                    }
                    (eu + et, eu >= et)
                })
                .collect();
            let total: f64 = norm.iter().map(|n| n.0).sum();
            let mut order: Vec<usize> = (0..results.len()).collect();
            order.sort_by(|&a, &b| norm[b].0.total_cmp(&norm[a].0));
            let budget = cfg.max_cells.saturating_sub(results.len()).max(1);
            let mut picked = Vec::new();
            let mut acc = 0.0;
            for &i in &order {
                if acc >= 0.5 * total || picked.len() >= budget {
                    break;
                }
                acc += norm[i].0;
                picked.push(i);
            }
            picked.sort_unstable_by(|a, b| b.cmp(a));
            let mut fresh = Vec::with_capacity(2 * picked.len());
            let mut stuck = 0usize;
            for i in picked {
                let c = results[i].cell;
                let split_u = norm[i].1;
                let (a, b) = if split_u {
                    let m = 0.5 * (c.u0 + c.u1);
                    if !(m > c.u0 && m < c.u1) || c.u1 - c.u0 < 1e-13 * inner {
                        stuck += 1;
                        continue;
                    }
                    (Cell { u1: m, ..c }, Cell { u0: m, ..c })
                } else {
                    let m = 0.5 * (c.t0 + c.t1);
                    if !(m > c.t0 && m < c.t1) || c.t1 - c.t0 < 1e-13 {
                        stuck += 1;
                        continue;
                    }
                    (Cell { t1: m, ..c }, Cell { t0: m, ..c })
                };
                results.swap_remove(i);
                fresh.push(a);
                fresh.push(b);
            }
            if fresh.is_empty() && stuck > 0 {
                // Every candidate is at floating-point resolution; accept.
                let rule = Self::freeze(&layout, &results, &gk);
                let stats = RuleStats { cells: results.len(), rounds, values, errors };
                return Ok((rule, stats));
            }
            for c in fresh {
                results.push(eval(c));
            }
        }
    }

    fn freeze(layout: &Layout, results: &[CellResult], gk: &[(f64, f64, f64); 15]) -> AxisRule {
        let mut nodes = Vec::with_capacity(results.len() * NODES_PER_CELL);
        let mut cells: Vec<Cell> = results.iter().map(|r| r.cell).collect();
        // Deterministic node order independent of refinement history.
        cells.sort_by(|a, b| {
            (a.outer, a.u0, a.t0)
                .partial_cmp(&(b.outer, b.u0, b.t0))
                .unwrap_or(core::cmp::Ordering::Equal)
        });
        for c in cells {
            let hu = 0.5 * (c.u1 - c.u0);
            let ht = 0.5 * (c.t1 - c.t0);
            let mu = 0.5 * (c.u1 + c.u0);
            let mt = 0.5 * (c.t1 + c.t0);
            for &(xu, wku, wgu) in gk.iter() {
                for &(xt, wkt, wgt) in gk.iter() {
                    let (z, rho, w) = layout.map(c.outer, mu + hu * xu, mt + ht * xt);
                    let wh = w * hu * ht;
                    nodes.push(AxisNode { z, rho, wk: wku * wkt * wh, wg: wgu * wgt * wh });
                }
            }
        }
        AxisRule { nodes, inner_radius: layout.inner, center: layout.center }
    }

    pub fn nodes(&self) -> &[AxisNode] {
        &self.nodes
    }

    pub fn cell_count(&self) -> usize {
        self.nodes.len() / NODES_PER_CELL
    }

    pub fn inner_radius(&self) -> f64 {
        self.inner_radius
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    /// Integrate `f(z, ρ)` with the frozen nodes.
    pub fn integrate<F: FnMut(f64, f64) -> f64>(&self, mut f: F) -> Estimate {
        self.integrate_indexed(|_, n| f(n.z, n.rho))
    }

    /// Integrate a function of the node index, for callers that cache
    /// per-node data in arrays parallel to [`AxisRule::nodes`].
    pub fn integrate_indexed<F: FnMut(usize, &AxisNode) -> f64>(&self, mut f: F) -> Estimate {
        let mut total = CompensatedSum::new();
        let mut err = 0.0;
        for (c, chunk) in self.nodes.chunks(NODES_PER_CELL).enumerate() {
            let mut k = 0.0;
            let mut g = 0.0;
            for (j, n) in chunk.iter().enumerate() {
                let v = f(c * NODES_PER_CELL + j, n);
                k += n.wk * v;
                g += n.wg * v;
            }
            total.add(k);
            err += abs(k - g);
        }
        Estimate { value: total.value(), error: err }
    }
}
