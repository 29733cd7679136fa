//! Radial potential families and audits of the smallness and decay
//! conditions the existence theory places on `V`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{ensure_finite, Error, Result};
use crate::math::{abs, exp, log_space, pow};
use crate::quadrature::{radial_integral, sobolev_constant};
use crate::roots::{find_root, RootOptions};

const RADIAL_CUTOFF: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum PotentialFamily {
    /// `A₀ (1+|x-c|)^{-κ}`.
    PowerDecay,
    /// `A₀ exp(1 - 1/(1-t²))` for `t = |x-c|/radius < 1`, zero outside.
    CompactBump,
    /// `A₀ (1+|x-c|)^{-κ} - B·bump(|x-c|/radius)`.
    SignChanging,
}

/// Parameters accepted by [`make_potential`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct PotentialParams {
    pub a0: f64,
    pub kappa: f64,
    /// Center of the potential; the origin when empty.
    pub center: Vec<f64>,
    pub bump_radius: f64,
    /// Height `B` of the negative bump of `SignChanging`.
    pub negative_amplitude: Option<f64>,
    /// Alternatively, the target `∫|V⁻|^{N/2} / S^{N/2}`; `B` is then tuned.
    pub negative_fraction: Option<f64>,
}

impl Default for PotentialParams {
    fn default() -> Self {
        Self { a0: 1.0, kappa: 3.0, center: Vec::new(), bump_radius: 1.0, negative_amplitude: None, negative_fraction: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PotentialSpec {
    family: PotentialFamily,
    n: usize,
    a0: f64,
    kappa: f64,
    center: Vec<f64>,
    bump_radius: f64,
    negative_amplitude: f64,
    negative_mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PotentialAudit {
    /// `(∫|V|^{N/2})^{2/N}`.
    pub norm_n_half: f64,
    /// `(∫|V|^N)^{1/N}`.
    pub norm_r: f64,
    /// Sampled `sup V(x)(1+|x|)^κ`, the smallest decay constant on the grid.
    pub envelope: f64,
    pub decay_ok: bool,
    /// `∫|V⁻|^{N/2}`.
    pub negative_mass: f64,
    /// `S^{N/2}`.
    pub negative_bound: f64,
    pub smallness_ok: bool,
    pub kappa_ok: bool,
}

impl PotentialAudit {
    pub fn passed(&self) -> bool {
        self.decay_ok && self.smallness_ok && self.kappa_ok
    }
}

fn bump(t: f64) -> f64 {
    if abs(t) >= 1.0 {
        0.0
    } else {
        exp(1.0 - 1.0 / (1.0 - t * t))
    }
}

fn kappa_floor(n: usize) -> f64 {
    2.0f64.max(n as f64 - 2.0)
}

/// Validate parameters and build a potential in dimension `n`.
pub fn make_potential(family: PotentialFamily, n: usize, params: &PotentialParams) -> Result<PotentialSpec> {
    if n < 3 {
        return Err(Error::InvalidParameter { name: "N", value: n as f64, reason: "dimension must be at least 3" });
    }
    ensure_finite("A0", params.a0)?;
    ensure_finite("kappa", params.kappa)?;
    if params.a0 < 0.0 {
        return Err(Error::InvalidParameter { name: "A0", value: params.a0, reason: "must be non-negative" });
    }
    if !(params.kappa > kappa_floor(n)) {
        return Err(Error::InvalidParameter { name: "kappa", value: params.kappa, reason: "need kappa > max(2, N-2)" });
    }
    if !(params.bump_radius > 0.0 && params.bump_radius.is_finite()) {
        return Err(Error::InvalidParameter { name: "bump_radius", value: params.bump_radius, reason: "must be positive" });
    }
    let center = if params.center.is_empty() { vec![0.0; n] } else { params.center.clone() };
    if center.len() != n || center.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidParameter { name: "center", value: center.len() as f64, reason: "must be a finite point in R^N" });
    }
    let mut spec = PotentialSpec {
        family,
        n,
        a0: params.a0,
        kappa: params.kappa,
        center,
        bump_radius: params.bump_radius,
        negative_amplitude: 0.0,
        negative_mass: 0.0,
    };
    let bound = pow(sobolev_constant(n)?, n as f64 / 2.0);
    if family == PotentialFamily::SignChanging {
        match (params.negative_amplitude, params.negative_fraction) {
            (Some(b), None) => {
                ensure_finite("negative_amplitude", b)?;
                if b < 0.0 {
                    return Err(Error::InvalidParameter { name: "negative_amplitude", value: b, reason: "must be non-negative" });
                }
                spec.negative_amplitude = b;
            }
            (None, Some(frac)) => {
                ensure_finite("negative_fraction", frac)?;
                if !(frac > 0.0) {
                    return Err(Error::InvalidParameter { name: "negative_fraction", value: frac, reason: "must be positive" });
                }
                spec.negative_amplitude = tune_negative_amplitude(&spec, frac * bound)?;
            }
            _ => {
                return Err(Error::InvalidParameter {
                    name: "negative_amplitude",
                    value: f64::NAN,
                    reason: "give exactly one of negative_amplitude and negative_fraction",
                })
            }
        }
    }
    spec.negative_mass = spec.negative_part_mass()?;
    if !(spec.negative_mass < bound) {
        return Err(Error::NegativePartTooLarge { mass: spec.negative_mass, bound });
    }
    Ok(spec)
}

fn tune_negative_amplitude(base: &PotentialSpec, target: f64) -> Result<f64> {
    let mass = |b: f64| -> Result<f64> {
        let mut s = base.clone();
        s.negative_amplitude = b;
        s.negative_part_mass()
    };
    let mut hi = 1.0;
    while mass(hi)? < target {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::MaxIterations { what: "negative amplitude bracket", iterations: 40 });
        }
    }
    let root = find_root(|b| Ok(mass(b)? - target), 0.0, hi, RootOptions { rtol: 1e-13, ..Default::default() })?;
    Ok(root.x)
}

impl PotentialSpec {
    /// `V ≡ 0`.
    pub fn zero(n: usize) -> Self {
        Self {
            family: PotentialFamily::PowerDecay,
            n,
            a0: 0.0,
            kappa: kappa_floor(n) + 1.0,
            center: vec![0.0; n],
            bump_radius: 1.0,
            negative_amplitude: 0.0,
            negative_mass: 0.0,
        }
    }

    pub fn family(&self) -> PotentialFamily {
        self.family
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn bump_radius(&self) -> f64 {
        self.bump_radius
    }

    pub fn negative_amplitude(&self) -> f64 {
        self.negative_amplitude
    }

    /// `∫|V⁻|^{N/2}` as computed at construction.
    pub fn negative_mass(&self) -> f64 {
        self.negative_mass
    }

    pub fn is_zero(&self) -> bool {
        self.a0 == 0.0 && self.negative_amplitude == 0.0
    }

    /// `V` at distance `d` from its center.
    pub fn radial(&self, d: f64) -> f64 {
        let t = abs(d) / self.bump_radius;
        match self.family {
            PotentialFamily::PowerDecay => self.a0 * pow(1.0 + abs(d), -self.kappa),
            PotentialFamily::CompactBump => self.a0 * bump(t),
            PotentialFamily::SignChanging => self.a0 * pow(1.0 + abs(d), -self.kappa) - self.negative_amplitude * bump(t),
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.radial(crate::geometry::distance(x, &self.center))
    }

    /// `V⁺ = max(V, 0)` at distance `d`.
    pub fn positive_part(&self, d: f64) -> f64 {
        self.radial(d).max(0.0)
    }

    /// `V⁻ = min(V, 0)` at distance `d`.
    pub fn negative_part(&self, d: f64) -> f64 {
        self.radial(d).min(0.0)
    }

    fn negative_part_mass(&self) -> Result<f64> {
        if self.negative_amplitude == 0.0 {
            return Ok(0.0);
        }
        let h = self.n as f64 / 2.0;
        Ok(radial_integral(|r| pow(-self.negative_part(r), h), RADIAL_CUTOFF.min(self.bump_radius * 2.0), self.n)?.value)
    }

    fn power_norm(&self, power: f64) -> Result<f64> {
        if self.is_zero() {
            return Ok(0.0);
        }
        let body = radial_integral(|r| pow(abs(self.radial(r)), power), RADIAL_CUTOFF, self.n)?;
        Ok(pow(body.value, 1.0 / power))
    }

    /// Norms, decay envelope and the negative-part smallness condition,
    /// with `L^r` taken at `r = N`.
    pub fn audit(&self) -> Result<PotentialAudit> {
        let n = self.n as f64;
        let norm_n_half = self.power_norm(n / 2.0)?;
        let norm_r = self.power_norm(n)?;
        let mut envelope: f64 = 0.0;
        // samples along a ray through the center and on the far side of the origin
        let dir = {
            let len = crate::math::norm(&self.center);
            if len > 0.0 { crate::geometry::scale(1.0 / len, &self.center) } else {
                let mut e = vec![0.0; self.n];
                e[0] = 1.0;
                e
            }
        };
        for s in log_space(1e-3, 1e6, 2000) {
            for sign in [1.0, -1.0] {
                let x = crate::geometry::axpy(sign * s, &dir, &self.center);
                let v = self.value(&x);
                let env = v * pow(1.0 + crate::math::norm(&x), self.kappa);
                envelope = envelope.max(env);
            }
        }
        let v0 = self.value(&vec![0.0; self.n]);
        envelope = envelope.max(v0);
        let negative_bound = pow(sobolev_constant(self.n)?, n / 2.0);
        Ok(PotentialAudit {
            norm_n_half,
            norm_r,
            envelope,
            decay_ok: envelope.is_finite(),
            negative_mass: self.negative_mass,
            negative_bound,
            smallness_ok: self.negative_mass < negative_bound,
            kappa_ok: self.kappa > kappa_floor(self.n),
        })
    }

    /// Lower bound `1 - S^{-1}(∫|V⁻|^{N/2})^{2/N}` of `‖u‖²_V / ‖u‖²`.
    pub fn norm_equivalence_constant(&self) -> Result<f64> {
        let n = self.n as f64;
        Ok(1.0 - pow(self.negative_mass, 2.0 / n) / sobolev_constant(self.n)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::PI;

    #[test]
    fn power_decay_is_accepted() {
        let v = make_potential(PotentialFamily::PowerDecay, 3, &PotentialParams::default()).unwrap();
        let audit = v.audit().unwrap();
        assert!(audit.passed());
        assert_eq!(audit.negative_mass, 0.0);
        assert!((audit.envelope - 1.0).abs() < 1e-12);
    }

    #[test]
    fn slow_decay_is_rejected() {
        let p = PotentialParams { kappa: 1.5, ..Default::default() };
        assert!(matches!(
            make_potential(PotentialFamily::PowerDecay, 3, &p),
            Err(Error::InvalidParameter { name: "kappa", .. })
        ));
        let p = PotentialParams { kappa: 2.0, ..Default::default() };
        assert!(make_potential(PotentialFamily::PowerDecay, 3, &p).is_err());
    }

    #[test]
    fn zero_potential_passes() {
        let p = PotentialParams { a0: 0.0, ..Default::default() };
        let v = make_potential(PotentialFamily::PowerDecay, 3, &p).unwrap();
        assert!(v.is_zero());
        let audit = v.audit().unwrap();
        assert!(audit.passed());
        assert_eq!(audit.norm_n_half, 0.0);
    }

    #[test]
    fn sign_changing_tuning() {
        let p = PotentialParams { negative_fraction: Some(0.5), ..Default::default() };
        let v = make_potential(PotentialFamily::SignChanging, 3, &p).unwrap();
        let bound = pow(sobolev_constant(3).unwrap(), 1.5);
        assert!((v.negative_mass() / bound - 0.5).abs() < 1e-9);
        let p = PotentialParams { negative_fraction: Some(1.5), ..Default::default() };
        assert!(matches!(make_potential(PotentialFamily::SignChanging, 3, &p), Err(Error::NegativePartTooLarge { .. })));
    }

    #[test]
    fn split_into_parts() {
        let p = PotentialParams { negative_amplitude: Some(3.0), ..Default::default() };
        let v = make_potential(PotentialFamily::SignChanging, 3, &p).unwrap();
        for d in [0.0, 0.3, 0.9, 2.0] {
            assert_eq!(v.positive_part(d) + v.negative_part(d), v.radial(d));
        }
    }

    #[test]
    fn n_half_norm_power_decay() {
        let v = make_potential(PotentialFamily::PowerDecay, 3, &PotentialParams::default()).unwrap();
        let audit = v.audit().unwrap();
        // 4π ∫ r²(1+r)^{-4.5} dr = 4π · Γ(3)Γ(1.5)/Γ(4.5)
        let beta = 2.0 * crate::math::gamma(1.5) / crate::math::gamma(4.5);
        let want = pow(4.0 * PI * beta, 2.0 / 3.0);
        assert!((audit.norm_n_half - want).abs() < 1e-9 * want);
    }
}
