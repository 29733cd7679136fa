use alloc::vec::Vec;

use super::gk::{self, GkOptions};
use super::Estimate;
use crate::error::{Error, Result};
use crate::math::{abs, gamma, ln, pow, sphere_area, PI};

/// `|S^{N-1}| ∫₀^∞ g(r) r^{N-1} dr`, integrated adaptively on `[0, r_max]`
/// with the remainder taken from a power law fitted to `g` on `[r_max/2, r_max]`.
pub fn radial_integral<G: FnMut(f64) -> f64>(g: G, r_max: f64, n_dim: usize) -> Result<Estimate> {
    radial_integral_with(g, r_max, n_dim, GkOptions { rel_tol: 1e-12, abs_tol: 0.0, max_segments: 8000 })
}

pub fn radial_integral_with<G: FnMut(f64) -> f64>(
    mut g: G,
    r_max: f64,
    n_dim: usize,
    opts: GkOptions,
) -> Result<Estimate> {
    let points = initial_points(r_max)?;
    let nf = n_dim as f64;
    let body = gk::integrate(|r| g(r) * pow(r, nf - 1.0), &points, opts)?;
    let rs = tail_radii(r_max);
    let (tail, tail_err) = power_tail(rs, [g(rs[0]), g(rs[1]), g(rs[2])], n_dim)?;
    let area = sphere_area(n_dim);
    Ok(Estimate { value: area * (body.value + tail), error: area * (body.error + tail_err) })
}

fn initial_points(r_max: f64) -> Result<Vec<f64>> {
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(Error::InvalidParameter { name: "r_max", value: r_max, reason: "must be positive and finite" });
    }
    let mut points = Vec::new();
    points.push(0.0);
    let mut b = 0.5;
    while b < r_max {
        points.push(b);
        b *= 2.0;
    }
    points.push(r_max);
    Ok(points)
}

fn tail_radii(r_max: f64) -> [f64; 3] {
    [0.5 * r_max, core::f64::consts::FRAC_1_SQRT_2 * r_max, r_max]
}

/// `∫_{r_max}^∞ g r^{N-1} dr` for `g ~ C r^k` fitted through three samples on
/// `[r_max/2, r_max]`, with the spread of the one-sided slopes as error.
fn power_tail(rs: [f64; 3], gs: [f64; 3], n_dim: usize) -> Result<(f64, f64)> {
    let nf = n_dim as f64;
    if gs[2] == 0.0 {
        return Ok((0.0, 0.0));
    }
    if gs.iter().any(|&v| v == 0.0 || (v > 0.0) != (gs[2] > 0.0)) {
        return Err(Error::TruncationUnsafe { exponent: f64::NAN, dimension: n_dim });
    }
    let xs = [ln(rs[0]), ln(rs[1]), ln(rs[2])];
    let ys = [ln(abs(gs[0])), ln(abs(gs[1])), ln(abs(gs[2]))];
    let fit = crate::math::linear_fit(&xs, &ys)?;
    let k = fit.slope;
    if k >= -nf {
        return Err(Error::TruncationUnsafe { exponent: k, dimension: n_dim });
    }
    let tail = gs[2] * pow(rs[2], nf) / (-k - nf);
    let k_lo = (ys[1] - ys[0]) / (xs[1] - xs[0]);
    let k_hi = (ys[2] - ys[1]) / (xs[2] - xs[1]);
    Ok((tail, abs(tail) * abs(k_hi - k_lo) / (-k - nf)))
}

/// A radial rule adapted once to a reference integrand and then reused for
/// integrands of similar shape, e.g. `f(αω)αω` for a range of `α`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialRule {
    n_dim: usize,
    /// Kronrod nodes segment by segment, followed by the three tail radii.
    nodes: Vec<f64>,
    /// `|S^{N-1}| r^{N-1}` times the Kronrod weight, and the same for the
    /// embedded Gauss weight.
    wk: Vec<f64>,
    wg: Vec<f64>,
}

impl RadialRule {
    pub fn build<G: FnMut(f64) -> f64>(mut g: G, r_max: f64, n_dim: usize, opts: GkOptions) -> Result<Self> {
        let points = initial_points(r_max)?;
        let nf = n_dim as f64;
        let (_, segs) = gk::adapt(|r| g(r) * pow(r, nf - 1.0), &points, opts)?;
        let area = sphere_area(n_dim);
        let mut nodes = Vec::with_capacity(15 * segs.len() + 3);
        let mut wk = Vec::with_capacity(nodes.capacity());
        let mut wg = Vec::with_capacity(nodes.capacity());
        for (a, b) in segs {
            let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
            for (x, k, gw) in gk::kronrod_nodes() {
                let r = c + h * x;
                let jac = area * h * pow(r, nf - 1.0);
                nodes.push(r);
                wk.push(k * jac);
                wg.push(gw * jac);
            }
        }
        nodes.extend_from_slice(&tail_radii(r_max));
        Ok(Self { n_dim, nodes, wk, wg })
    }

    /// Quadrature radii; the last three are the tail-fit samples.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `|S^{N-1}| ∫ g r^{N-1}` with `g` given by node index.
    pub fn integrate_indexed<G: FnMut(usize) -> f64>(&self, mut g: G) -> Result<Estimate> {
        let body = self.wk.len();
        let mut sum = crate::math::CompensatedSum::new();
        let mut err = 0.0;
        for seg in (0..body).step_by(15) {
            let (mut k, mut gs) = (0.0, 0.0);
            for i in seg..seg + 15 {
                let v = g(i);
                k += self.wk[i] * v;
                gs += self.wg[i] * v;
            }
            sum.add(k);
            err += abs(k - gs);
        }
        let rs = [self.nodes[body], self.nodes[body + 1], self.nodes[body + 2]];
        let (tail, tail_err) = power_tail(rs, [g(body), g(body + 1), g(body + 2)], self.n_dim)?;
        let area = sphere_area(self.n_dim);
        let value = sum.value() + area * tail;
        if !value.is_finite() {
            return Err(Error::NonFinite { what: "quadrature value", value });
        }
        Ok(Estimate { value, error: err + area * tail_err })
    }

    pub fn integrate<G: FnMut(f64) -> f64>(&self, mut g: G) -> Result<Estimate> {
        let nodes = &self.nodes;
        self.integrate_indexed(|i| g(nodes[i]))
    }
}

/// Closed-form best Sobolev constant `πN(N-2) (Γ(N/2)/Γ(N))^{2/N}`.
pub fn sobolev_formula(n_dim: usize) -> Result<f64> {
    if n_dim < 3 {
        return Err(Error::InvalidParameter { name: "N", value: n_dim as f64, reason: "dimension must be at least 3" });
    }
    let n = n_dim as f64;
    Ok(PI * n * (n - 2.0) * pow(gamma(n / 2.0) / gamma(n), 2.0 / n))
}

/// Rayleigh quotient `‖∇U‖² / |U|²_{2*}` of `U(x) = (1+|x|²)^{-(N-2)/2}`.
pub fn sobolev_rayleigh_quotient(n_dim: usize) -> Result<f64> {
    if n_dim < 3 {
        return Err(Error::InvalidParameter { name: "N", value: n_dim as f64, reason: "dimension must be at least 3" });
    }
    let n = n_dim as f64;
    let r_max = 1e4;
    // |U'|² = (N-2)² r² (1+r²)^{-N};  U^{2*} = (1+r²)^{-N}
    let grad = radial_integral(|r| (n - 2.0) * (n - 2.0) * r * r * pow(1.0 + r * r, -n), r_max, n_dim)?;
    let mass = radial_integral(|r| pow(1.0 + r * r, -n), r_max, n_dim)?;
    Ok(grad.value / pow(mass.value, (n - 2.0) / n))
}

/// Best constant `S` of `D^{1,2}(ℝ^N) ↪ L^{2*}(ℝ^N)`, checked against the
/// Rayleigh quotient of the Aubin–Talenti bubble to `1e-6` relative.
pub fn sobolev_constant(n_dim: usize) -> Result<f64> {
    let s = sobolev_formula(n_dim)?;
    let q = sobolev_rayleigh_quotient(n_dim)?;
    let tol = 1e-6;
    if abs(s - q) > tol * s {
        return Err(Error::ConsistencyFailure { what: "Sobolev constant", primary: s, oracle: q, tolerance: tol });
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_integrand() {
        let e = radial_integral(|_| 0.0, 100.0, 3).unwrap();
        assert_eq!(e.value, 0.0);
    }

    #[test]
    fn unit_ball_volume() {
        let e = radial_integral(|r| if r <= 1.0 { 1.0 } else { 0.0 }, 10.0, 3).unwrap();
        assert!((e.value - 4.0 * PI / 3.0).abs() < 1e-10, "{}", e.value);
    }

    #[test]
    fn constant_integrand_is_truncation_unsafe() {
        let err = radial_integral(|_| 1.0, 10.0, 3).unwrap_err();
        assert!(matches!(err, Error::TruncationUnsafe { .. }));
    }

    #[test]
    fn slowly_decaying_integrand_is_rejected() {
        // r^{-3} is borderline non-integrable in three dimensions
        let err = radial_integral(|r| pow(1.0 + r, -3.0), 1e3, 3).unwrap_err();
        assert!(matches!(err, Error::TruncationUnsafe { .. }));
    }

    #[test]
    fn frozen_rule_reuses_nodes() {
        let rule = RadialRule::build(|r| pow(1.0 + r, -5.0), 1e4, 3, GkOptions { rel_tol: 1e-12, abs_tol: 0.0, max_segments: 4000 }).unwrap();
        let direct = radial_integral(|r| pow(1.0 + r, -6.0), 1e4, 3).unwrap();
        let frozen = rule.integrate(|r| pow(1.0 + r, -6.0)).unwrap();
        assert!((direct.value - frozen.value).abs() < 1e-9 * direct.value);
        assert!(frozen.error < 1e-8 * frozen.value);
    }

    #[test]
    fn sobolev_three_dimensions() {
        let s = sobolev_constant(3).unwrap();
        assert!((s - 5.4779).abs() < 5e-4, "{s}");
    }
}
