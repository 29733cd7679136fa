//! Experiment configuration: JSON schema, `--set` overrides and validation.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use zeromass::potential::{make_potential, PotentialParams};
use zeromass::radial_ode::StepControl;
use zeromass::{NonlinearitySpec, PotentialFamily, PotentialSpec, QuadratureConfig};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[value(rename_all = "verbatim")]
pub enum Task {
    GroundState,
    Audit,
    EpsilonScan,
    Landscape,
    VerifyLemmas,
    Sobolev,
    CvEstimate,
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonlinearityConfig {
    #[serde(rename = "N")]
    pub n: usize,
    pub p: f64,
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PotentialConfig {
    pub family: PotentialFamily,
    #[serde(rename = "A0")]
    pub a0: f64,
    pub kappa: f64,
    pub center: Vec<f64>,
    pub bump_radius: f64,
    pub negative_amplitude: Option<f64>,
    pub negative_fraction: Option<f64>,
}

impl Default for PotentialConfig {
    fn default() -> Self {
        let p = PotentialParams::default();
        Self {
            family: PotentialFamily::PowerDecay,
            a0: p.a0,
            kappa: p.kappa,
            center: p.center,
            bump_radius: p.bump_radius,
            negative_amplitude: p.negative_amplitude,
            negative_fraction: p.negative_fraction,
        }
    }
}

impl PotentialConfig {
    pub fn params(&self) -> PotentialParams {
        PotentialParams {
            a0: self.a0,
            kappa: self.kappa,
            center: self.center.clone(),
            bump_radius: self.bump_radius,
            negative_amplitude: self.negative_amplitude,
            negative_fraction: self.negative_fraction,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Anchors {
    /// Unit vector; the first coordinate axis when empty.
    pub y0: Vec<f64>,
    /// A point with `|y - y0| = 2`; `3 y0` when empty.
    pub y: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Grids {
    #[serde(rename = "R")]
    pub r: Vec<f64>,
    pub lambda: Vec<f64>,
    /// Scaling factors of the mean-value check.
    pub s: Vec<f64>,
    /// Sample points of the growth audit.
    pub audit: Vec<f64>,
    /// Separation of the landscape scan; the largest `R` when absent.
    pub landscape_r: Option<f64>,
    /// Bound `b` of the mean-value check.
    pub tvm_b: f64,
    /// Box `[0, a]` and lattice sizes of the superadditivity constant.
    pub new_a: f64,
    pub new_grid: Vec<usize>,
    pub new_nu: Option<f64>,
    /// Number of random isometries for the barycenter check.
    pub isometries: usize,
}

impl Default for Grids {
    fn default() -> Self {
        Self {
            r: vec![8.0, 11.0, 16.0, 23.0, 32.0, 45.0, 64.0],
            lambda: (0..21).map(|i| if i == 20 { 1.0 } else { i as f64 / 20.0 }).collect(),
            s: vec![0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0],
            audit: zeromass::math::log_space(1e-4, 1e4, 400),
            landscape_r: None,
            tvm_b: 4.0,
            new_a: 2.0,
            new_grid: vec![200, 400],
            new_nu: None,
            isometries: 3,
        }
    }
}

/// Acceptance tolerances attached to each task's checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub decay_u: f64,
    pub decay_du: f64,
    pub nehari: f64,
    pub pohozaev: f64,
    pub epsilon_slope: f64,
    pub power_two_center: f64,
    pub power_three_center: f64,
    pub vplus_slope: f64,
    pub projection: f64,
    pub landscape_eta: f64,
    pub endpoint: f64,
    pub tvm_spread: f64,
    pub lemma_new: f64,
    pub barycenter: f64,
    pub cv: f64,
    pub sobolev: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            decay_u: 0.05,
            decay_du: 0.1,
            nehari: 5e-3,
            pohozaev: 1e-2,
            epsilon_slope: 0.05,
            power_two_center: 0.1,
            power_three_center: 0.15,
            vplus_slope: 0.15,
            projection: 0.05,
            landscape_eta: 0.01,
            endpoint: 0.05,
            tvm_spread: 0.2,
            lemma_new: 0.05,
            barycenter: 1e-6,
            cv: 0.02,
            sobolev: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task: Option<Task>,
    pub nonlinearity: NonlinearityConfig,
    #[serde(default)]
    pub potential: PotentialConfig,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default)]
    pub ode: StepControl,
    #[serde(default)]
    pub anchors: Anchors,
    #[serde(default)]
    pub grids: Grids,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Subset of lemma groups run by `VerifyLemmas`; all when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemmas: Option<Vec<String>>,
    /// Precomputed ground-state profile CSV.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<PathBuf>,
    /// Profile cache directory; `<out>/profile-cache` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cache_dir: Option<PathBuf>,
    /// Not echoed, so runs in different directories produce identical artifacts.
    #[serde(default, skip_serializing)]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug)]
pub struct SchemaError(pub String);

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for SchemaError {}

fn schema(msg: impl Into<String>) -> SchemaError {
    SchemaError(msg.into())
}

/// Set `key` (dot-separated path) in `root` to `raw`, parsed as JSON when
/// possible and kept as a string otherwise.
pub fn apply_override(root: &mut Value, key: &str, raw: &str) -> Result<(), SchemaError> {
    let mut value = Some(serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string())));
    let mut node = root;
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(schema(format!("malformed override key {key:?}")));
    }
    for (i, part) in parts.iter().enumerate() {
        let obj = node.as_object_mut().ok_or_else(|| schema(format!("override {key:?}: {part:?} is not inside an object")))?;
        if i + 1 == parts.len() {
            obj.insert(part.to_string(), value.take().unwrap_or_default());
            return Ok(());
        }
        node = obj.entry(part.to_string()).or_insert_with(|| Value::Object(Default::default()));
    }
    unreachable!()
}

impl ExperimentConfig {
    pub fn from_value(value: Value) -> Result<Self, SchemaError> {
        match value.get("schema") {
            Some(Value::Number(n)) if n.as_u64() == Some(SCHEMA_VERSION as u64) => {}
            Some(other) => return Err(schema(format!("unsupported schema version {other}, expected {SCHEMA_VERSION}"))),
            None => return Err(schema("missing field `schema`")),
        }
        serde_json::from_value(value).map_err(|e| schema(e.to_string()))
    }

    pub fn load(path: &Path, overrides: &[String]) -> Result<Self, SchemaError> {
        let text = std::fs::read_to_string(path).map_err(|e| schema(format!("cannot read {}: {e}", path.display())))?;
        let mut value: Value = serde_json::from_str(&text).map_err(|e| schema(format!("{}: {e}", path.display())))?;
        for kv in overrides {
            let (k, v) = kv.split_once('=').ok_or_else(|| schema(format!("override {kv:?} is not of the form key=value")))?;
            apply_override(&mut value, k.trim(), v.trim())?;
        }
        let mut cfg = Self::from_value(value)?;
        if let Some(dir) = path.parent() {
            if let Some(p) = &cfg.profile {
                if p.is_relative() {
                    cfg.profile = Some(dir.join(p));
                }
            }
        }
        Ok(cfg)
    }

    pub fn nonlinearity_spec(&self) -> Result<NonlinearitySpec, SchemaError> {
        let c = &self.nonlinearity;
        NonlinearitySpec::new(c.n, c.p, c.q).map_err(|e| schema(format!("nonlinearity: {e}")))
    }

    pub fn potential_spec(&self) -> Result<PotentialSpec, SchemaError> {
        make_potential(self.potential.family, self.nonlinearity.n, &self.potential.params())
            .map_err(|e| schema(format!("potential: {e}")))
    }

    pub fn anchors(&self) -> Result<(Vec<f64>, Vec<f64>), SchemaError> {
        let n = self.nonlinearity.n;
        let (d0, _) = zeromass::energy::default_anchors(n);
        let y0 = if self.anchors.y0.is_empty() { d0 } else { self.anchors.y0.clone() };
        let y = if self.anchors.y.is_empty() { y0.iter().map(|v| 3.0 * v).collect::<Vec<_>>() } else { self.anchors.y.clone() };
        if y0.len() != n || y.len() != n {
            return Err(schema(format!("anchors must have {n} coordinates")));
        }
        let norm = y0.iter().map(|v| v * v).sum::<f64>().sqrt();
        let gap = y0.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 || (gap - 2.0).abs() > 1e-12 {
            return Err(schema(format!("anchors need |y0| = 1 and |y - y0| = 2, got {norm} and {gap}")));
        }
        Ok((y0, y))
    }

    pub fn landscape_r(&self) -> f64 {
        self.grids.landscape_r.unwrap_or_else(|| self.grids.r.iter().cloned().fold(0.0, f64::max))
    }

    /// Checks that do not need any numerics, run before anything is written.
    pub fn validate(&self, task: Task) -> Result<(), SchemaError> {
        let g = &self.grids;
        if g.r.is_empty() || g.r.iter().any(|r| !(r.is_finite() && *r >= 1.0)) {
            return Err(schema("grids.R must be non-empty with every R >= 1"));
        }
        if g.r.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) {
            return Err(schema("grids.R must be strictly increasing"));
        }
        if g.lambda.iter().any(|l| !(0.0..=1.0).contains(l)) {
            return Err(schema("grids.lambda must lie in [0, 1]"));
        }
        if matches!(task, Task::Landscape | Task::VerifyLemmas) {
            for need in [0.0, 0.5, 1.0] {
                if !g.lambda.contains(&need) {
                    return Err(schema(format!("grids.lambda must contain {need}")));
                }
            }
        }
        if g.s.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(schema("grids.s must be non-negative"));
        }
        if self.quadrature.tol <= 0.0 || self.ode.rtol <= 0.0 {
            return Err(schema("tolerances must be positive"));
        }
        let consumes_profile = !matches!(task, Task::Audit | Task::Sobolev);
        if consumes_profile {
            if let Some(p) = &self.profile {
                if !p.is_file() {
                    return Err(schema(format!("profile file {} does not exist", p.display())));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_create_nested_keys() {
        let mut v: Value = serde_json::json!({"schema": 1});
        apply_override(&mut v, "tolerances.epsilon_slope", "0.001").unwrap();
        apply_override(&mut v, "potential.family", "CompactBump").unwrap();
        assert_eq!(v["tolerances"]["epsilon_slope"], 0.001);
        assert_eq!(v["potential"]["family"], "CompactBump");
        assert!(apply_override(&mut v, "a..b", "1").is_err());
    }

    #[test]
    fn missing_exponent_is_a_schema_error() {
        let v = serde_json::json!({"schema": 1, "nonlinearity": {"N": 3, "p": 4}});
        let err = ExperimentConfig::from_value(v).unwrap_err();
        assert!(err.0.contains("q"), "{err}");
    }

    #[test]
    fn wrong_schema_version_is_rejected() {
        let v = serde_json::json!({"schema": 2, "nonlinearity": {"N": 3, "p": 4, "q": 8}});
        assert!(ExperimentConfig::from_value(v).is_err());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let v = serde_json::json!({"schema": 1, "nonlinearity": {"N": 3, "p": 4, "q": 8}, "tolerance": {}});
        assert!(ExperimentConfig::from_value(v).is_err());
    }

    #[test]
    fn defaults_fill_the_model_problem() {
        let v = serde_json::json!({"schema": 1, "nonlinearity": {"N": 3, "p": 4, "q": 8}});
        let cfg = ExperimentConfig::from_value(v).unwrap();
        assert_eq!(cfg.grids.lambda.len(), 21);
        assert_eq!(cfg.landscape_r(), 64.0);
        let (y0, y) = cfg.anchors().unwrap();
        assert_eq!((y0, y), (vec![1.0, 0.0, 0.0], vec![3.0, 0.0, 0.0]));
        cfg.potential_spec().unwrap();
        cfg.validate(Task::VerifyLemmas).unwrap();
    }
}
