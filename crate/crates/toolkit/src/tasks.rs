//! One function per task. Each writes its artifacts into the run directory
//! and returns the checks that decide the exit status.

use std::path::PathBuf;

use anyhow::{Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use zeromass::asymptotics::{self as asy, ScanReport};
use zeromass::energy::{ground_level, EnergyContext};
use zeromass::geometry::{distance, norm, Isometry};
use zeromass::math::critical_exponent;
use zeromass::potential::{make_potential, PotentialParams};
use zeromass::quadrature::{sobolev_constant, sobolev_formula, sobolev_rayleigh_quotient};
use zeromass::radial_ode::{decay_report, ground_state, tail_convergence};
use zeromass::{NonlinearitySpec, PotentialFamily, PotentialSpec, RadialProfile};

use crate::artifacts::{num, read_profile, write_json, write_profile, write_scan, write_table};
use crate::cache::profile_key;
use crate::checks::{Check, Relation};
use crate::config::{ExperimentConfig, Task};

/// Lemma groups run by `VerifyLemmas`, in order.
pub const LEMMA_GROUPS: [&str; 12] = [
    "ground_state",
    "identities",
    "interaction",
    "power",
    "vplus",
    "projection",
    "landscape",
    "mean_value",
    "superadditivity",
    "barycenter",
    "level",
    "audit",
];

pub struct Run {
    pub cfg: ExperimentConfig,
    pub spec: NonlinearitySpec,
    pub potential: PotentialSpec,
    pub y0: Vec<f64>,
    pub y: Vec<f64>,
    pub out: PathBuf,
    pub preloaded: Option<RadialProfile>,
}

fn rel_spread(values: &[f64]) -> f64 {
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    if hi == lo {
        0.0
    } else {
        (hi - lo) / hi.abs().max(lo.abs())
    }
}

impl Run {
    fn n(&self) -> f64 {
        self.spec.dimension() as f64
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    /// The configured profile, the cached one, or a fresh solve stored in the cache.
    pub fn profile(&self) -> Result<RadialProfile> {
        if let Some(p) = &self.preloaded {
            return Ok(p.clone());
        }
        let dir = self.cfg.cache_dir.clone().unwrap_or_else(|| self.out.join("profile-cache"));
        let file = dir.join(format!("profile-{}.csv", profile_key(&self.spec, &self.cfg.ode)));
        if file.is_file() {
            if let Ok(p) = read_profile(&file, &self.spec) {
                return Ok(p);
            }
        }
        let profile = ground_state(&self.spec, &self.cfg.ode)?;
        std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        write_profile(&file, &profile, &self.spec)?;
        Ok(profile)
    }

    fn scan(&self, stem: &str, report: &ScanReport) -> Result<()> {
        write_scan(&self.out, stem, report, &self.cfg)
    }

    pub fn execute(&self, task: Task) -> Result<Vec<Check>> {
        match task {
            Task::GroundState => self.ground_state_task(),
            Task::Audit => self.audit(),
            Task::EpsilonScan => {
                let profile = self.profile()?;
                self.interaction(&profile)
            }
            Task::Landscape => {
                let profile = self.profile()?;
                let ctx = self.context(&profile)?;
                let mut checks = self.projection(&ctx)?;
                checks.extend(self.landscape(&ctx)?);
                Ok(checks)
            }
            Task::CvEstimate => {
                let profile = self.profile()?;
                self.level(&self.context(&profile)?)
            }
            Task::Sobolev => self.sobolev(),
            Task::VerifyLemmas => self.verify_lemmas(),
        }
    }

    fn context<'p>(&'p self, profile: &'p RadialProfile) -> Result<EnergyContext<'p>> {
        Ok(EnergyContext::new(&self.spec, profile, &self.potential, self.cfg.quadrature)?)
    }

    fn ground_state_task(&self) -> Result<Vec<Check>> {
        let profile = self.profile()?;
        write_profile(&self.path("profile.csv"), &profile, &self.spec)?;
        let mut checks = self.decay(&profile)?;
        checks.extend(self.identities(&profile)?);
        Ok(checks)
    }

    fn decay(&self, profile: &RadialProfile) -> Result<Vec<Check>> {
        #[derive(Serialize)]
        struct Decay {
            report: zeromass::radial_ode::DecayReport,
            tail_convergence: zeromass::math::LinearFit,
            amplitude: f64,
            r_max: f64,
            nodes: usize,
            max_ode_residual: f64,
        }
        let report = decay_report(profile)?;
        let decay = Decay {
            report,
            tail_convergence: tail_convergence(profile)?,
            amplitude: profile.amplitude(),
            r_max: profile.r_max(),
            nodes: profile.r().len(),
            max_ode_residual: profile.max_ode_residual(&self.spec),
        };
        write_json(&self.path("decay.json"), &decay)?;
        let tol = &self.cfg.tolerances;
        let u = profile.u();
        let min_u = u.iter().cloned().fold(f64::INFINITY, f64::min);
        let max_step = u.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
        let g = "ground_state";
        Ok(vec![
            Check::new(g, "tail_exponent_u", report.exponent_u.slope, -(self.n() - 2.0), Relation::Within, tol.decay_u),
            Check::new(g, "tail_exponent_du", report.exponent_du.slope, -(self.n() - 1.0), Relation::Within, tol.decay_du),
            Check::new(g, "min_u", min_u, 0.0, Relation::Above, 0.0),
            Check::new(g, "max_increment_u", max_step, 0.0, Relation::Below, 0.0),
        ])
    }

    fn identities(&self, profile: &RadialProfile) -> Result<Vec<Check>> {
        let level = ground_level(&self.spec, profile)?;
        write_json(&self.path("ground_level.json"), &level)?;
        let tol = &self.cfg.tolerances;
        let g = "identities";
        Ok(vec![
            Check::new(g, "nehari_gap", level.nehari_gap, tol.nehari, Relation::Below, 0.0),
            Check::new(g, "pohozaev_gap", level.pohozaev_gap, tol.pohozaev, Relation::Below, 0.0),
        ])
    }

    fn audit(&self) -> Result<Vec<Check>> {
        let grid = &self.cfg.grids.audit;
        let growth = self.spec.growth_audit(grid)?;
        write_json(&self.path("growth_audit.json"), &growth)?;
        let rows = grid
            .iter()
            .map(|&s| {
                let (big_f, f, df) = self.spec.eval(s)?;
                let g = self.spec.logarithmic_derivative(s)?;
                Ok(vec![num(s), num(big_f), num(f), num(df), num(g)])
            })
            .collect::<Result<Vec<_>>>()?;
        write_table(&self.path("nonlinearity.csv"), &["s", "F", "f", "df", "g"], rows)?;
        let pot = self.potential.audit()?;
        write_json(&self.path("potential_audit.json"), &pot)?;

        let n = self.spec.dimension();
        let crit = critical_exponent(n) - 1.0;
        let floor = 2f64.max(self.n() - 2.0);
        let rejects = |kappa: f64| {
            let params = PotentialParams { kappa, ..PotentialParams::default() };
            make_potential(PotentialFamily::PowerDecay, n, &params).is_err()
        };
        let g = "audit";
        Ok(vec![
            Check::new(g, "growth_failures", growth.failures.len() as f64, 0.0, Relation::Within, 0.0),
            Check::new(g, "theta", growth.theta_est, self.spec.p(), Relation::AtLeast, 0.0),
            Check::new(g, "g_at_small_s", growth.g_limits.0, crit, Relation::Above, 0.0),
            Check::new(g, "g_at_large_s", growth.g_limits.1, crit, Relation::Below, 0.0),
            Check::flag(g, "potential_decay", pot.decay_ok),
            Check::flag(g, "potential_smallness", pot.smallness_ok),
            Check::flag(g, "potential_kappa", pot.kappa_ok),
            Check::flag(g, "rejects_kappa_at_floor", rejects(floor)),
            Check::flag(g, "rejects_kappa_below_floor", rejects(floor - 0.5)),
        ])
    }

    fn interaction(&self, profile: &RadialProfile) -> Result<Vec<Check>> {
        let cfg = &self.cfg.quadrature;
        let rows = self
            .cfg
            .grids
            .r
            .par_iter()
            .map(|&r| asy::epsilon_row(&self.spec, profile, r, &self.y0, &self.y, cfg))
            .collect::<zeromass::Result<Vec<_>>>()?;
        let report = asy::epsilon_report(self.spec.dimension(), &self.y0, &self.y, rows)?;
        self.scan("epsilon", &report)?;
        let slope = report.fit("epsilon").map_or(f64::NAN, |f| f.slope);
        let (c4, c3) = (report.margin("C4").unwrap_or(f64::NAN), report.margin("C3").unwrap_or(f64::NAN));
        let g = "interaction";
        Ok(vec![
            Check::new(g, "epsilon_slope", slope, -(self.n() - 2.0), Relation::Within, self.cfg.tolerances.epsilon_slope),
            Check::new(g, "C4", c4, 0.0, Relation::Above, 0.0),
            Check::new(g, "C4_minus_C3", c4 - c3, 0.0, Relation::AtMost, 0.0),
        ])
    }

    fn power(&self) -> Result<Vec<Check>> {
        let (cfg, grid, n) = (&self.cfg.quadrature, &self.cfg.grids.r, self.n());
        let (two, three) = rayon::join(
            || asy::two_center_power_scan(n + 2.0, n - 2.0, grid, &self.y0, &self.y, cfg),
            || asy::three_center_power_scan(3.0, n - 2.0, grid, &self.y0, &self.y, cfg),
        );
        let (two, three) = (two?, three?);
        self.scan("power_two_center", &two)?;
        self.scan("power_three_center", &three)?;
        let tol = &self.cfg.tolerances;
        let slope = |r: &ScanReport| r.fit("power").map_or(f64::NAN, |f| f.slope);
        let g = "power";
        Ok(vec![
            Check::new(g, "two_center_slope", slope(&two), -two.margin("mu").unwrap_or(f64::NAN), Relation::Within, tol.power_two_center),
            Check::new(
                g,
                "three_center_slope",
                slope(&three),
                -three.margin("tau").unwrap_or(f64::NAN),
                Relation::Within,
                tol.power_three_center,
            ),
        ])
    }

    fn vplus(&self, profile: &RadialProfile) -> Result<Vec<Check>> {
        let cfg = &self.cfg.quadrature;
        let rows = self
            .cfg
            .grids
            .r
            .par_iter()
            .map(|&r| asy::vplus_row(profile, &self.potential, r, &self.y0, &self.y, cfg))
            .collect::<zeromass::Result<Vec<_>>>()?;
        let report = asy::vplus_report(self.spec.dimension(), self.potential.kappa(), &self.y0, &self.y, rows)?;
        self.scan("vplus", &report)?;
        let slope = report.fit("vplus").map_or(f64::NAN, |f| f.slope);
        let tau = report.margin("tau").unwrap_or(f64::NAN);
        let g = "vplus";
        Ok(vec![
            Check::new(g, "slope", slope, -tau, Relation::Within, self.cfg.tolerances.vplus_slope),
            Check::new(g, "slope_vs_interaction", slope, -(self.n() - 2.0), Relation::Below, 0.0),
        ])
    }

    fn projection(&self, ctx: &EnergyContext) -> Result<Vec<Check>> {
        let rows = self
            .cfg
            .grids
            .r
            .par_iter()
            .map(|&r| asy::projection_row(ctx, 0.5, r, &self.y0, &self.y))
            .collect::<zeromass::Result<Vec<_>>>()?;
        let report = asy::projection_report(self.spec.dimension(), &self.y0, &self.y, rows)?;
        self.scan("projection", &report)?;
        let g = "projection";
        Ok(vec![
            Check::new(g, "T_at_largest_R", report.margin("T_last").unwrap_or(f64::NAN), 2.0, Relation::RelWithin, self.cfg.tolerances.projection),
            Check::flag(g, "T_monotone_in_R", report.margin("monotone") == Some(1.0)),
        ])
    }

    fn landscape(&self, ctx: &EnergyContext) -> Result<Vec<Check>> {
        let level = ctx.c0()?;
        let r = self.cfg.landscape_r();
        let rows = asy::landscape_rows(ctx, r, &self.cfg.grids.lambda, &self.y0, &self.y)?;
        let report = asy::landscape_report(self.spec.dimension(), level.c0, &self.y0, &self.y, rows)?;
        self.scan("landscape", &report)?;
        let m = |k: &str| report.margin(k).unwrap_or(f64::NAN);
        let tol = &self.cfg.tolerances;
        let g = "landscape";
        Ok(vec![
            Check::new(g, "eta_over_c0", m("eta_rel"), tol.landscape_eta, Relation::Above, 0.0),
            Check::new(g, "endpoint_over_c0", m("I_at_1") / level.c0, 1.0 + tol.endpoint, Relation::Below, 0.0),
            Check::flag(g, "argmax_interior", m("interior") == 1.0),
        ])
    }

    fn mean_value(&self, profile: &RadialProfile) -> Result<Vec<Check>> {
        let (cfg, grids) = (&self.cfg.quadrature, &self.cfg.grids);
        let rows = grids
            .r
            .par_iter()
            .map(|&r| asy::tvm_rows(&self.spec, profile, grids.tvm_b, &grids.s, r, &self.y0, &self.y, cfg))
            .collect::<zeromass::Result<Vec<_>>>()?;
        let report = asy::tvm_report(self.spec.dimension(), &self.y0, &self.y, rows.into_iter().flatten().collect())?;
        self.scan("mean_value", &report)?;
        let g = "mean_value";
        Ok(vec![
            Check::flag(g, "C_b_finite", report.margin("C_b_est").is_some_and(f64::is_finite)),
            Check::new(g, "C_b_spread", report.margin("C_b_spread").unwrap_or(f64::NAN), self.cfg.tolerances.tvm_spread, Relation::Below, 0.0),
        ])
    }

    fn superadditivity(&self) -> Result<Vec<Check>> {
        let grids = &self.cfg.grids;
        let nu = grids.new_nu.unwrap_or_else(|| self.spec.default_nu());
        let values = grids
            .new_grid
            .par_iter()
            .map(|&k| self.spec.lemma_new_constant(grids.new_a, nu, k))
            .collect::<zeromass::Result<Vec<_>>>()?;
        let rows = grids.new_grid.iter().zip(&values).map(|(k, c)| vec![k.to_string(), num(grids.new_a), num(nu), num(*c)]);
        write_table(&self.path("superadditivity.csv"), &["grid", "a", "nu", "C_a"], rows)?;
        let g = "superadditivity";
        Ok(vec![
            Check::flag(g, "C_a_finite", !values.is_empty() && values.iter().all(|c| c.is_finite())),
            Check::new(g, "C_a_refinement_spread", rel_spread(&values), self.cfg.tolerances.lemma_new, Relation::AtMost, 0.0),
        ])
    }

    fn barycenter(&self, profile: &RadialProfile) -> Result<Vec<Check>> {
        let n = self.spec.dimension();
        let cfg = &self.cfg.quadrature;
        let r = self.cfg.grids.r[0];
        let c0: Vec<f64> = self.y0.iter().map(|v| r * v).collect();
        let cy: Vec<f64> = self.y.iter().map(|v| r * v).collect();
        let weights = (0.3, 0.7);
        let base = asy::barycenter_of(profile, &[(weights.0, &c0), (weights.1, &cy)], cfg)?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut rows = Vec::new();
        let (mut shift_defect, mut turn_defect) = (0.0f64, 0.0f64);
        for k in 0..self.cfg.grids.isometries {
            let shift: Vec<f64> = (0..n).map(|_| rng.random_range(-20.0..20.0)).collect();
            let rot = loop {
                let m: Vec<f64> = (0..n * n).map(|_| rng.random_range(-1.0..1.0)).collect();
                if let Ok(rot) = Isometry::rotation_from(&m, n) {
                    break rot;
                }
            };
            for (kind, iso) in [("translation", Isometry::translation(&shift)), ("rotation", rot)] {
                let moved = asy::barycenter_of(profile, &[(weights.0, &iso.apply(&c0)), (weights.1, &iso.apply(&cy))], cfg)?;
                let defect = distance(&moved, &iso.apply(&base));
                if kind == "translation" {
                    shift_defect = shift_defect.max(defect);
                } else {
                    turn_defect = turn_defect.max(defect);
                }
                rows.push(vec![k.to_string(), kind.to_string(), num(defect)]);
            }
        }
        let origin = vec![0.0; n];
        let radial = norm(&asy::barycenter_of(profile, &[(1.0, &origin)], cfg)?);
        rows.push(vec![String::new(), "radial".to_string(), num(radial)]);
        write_table(&self.path("barycenter.csv"), &["sample", "kind", "defect"], rows)?;
        let tol = self.cfg.tolerances.barycenter;
        let g = "barycenter";
        Ok(vec![
            Check::new(g, "translation_defect", shift_defect, tol, Relation::AtMost, 0.0),
            Check::new(g, "rotation_defect", turn_defect, tol, Relation::AtMost, 0.0),
            Check::new(g, "radial_state", radial, tol, Relation::AtMost, 0.0),
        ])
    }

    fn level(&self, ctx: &EnergyContext) -> Result<Vec<Check>> {
        let c0 = ctx.c0()?.c0;
        let est = ctx.cv_upper_estimate(&self.cfg.grids.r, &self.y0, &self.y)?;
        let rows = est.rows.iter().map(|(r, t, i)| vec![num(*r), num(*t), num(*i), num(i / c0)]);
        write_table(&self.path("level.csv"), &["R", "T", "I_V", "I_V_over_c0"], rows)?;
        #[derive(Serialize)]
        struct Level<'a> {
            c0: f64,
            estimate: f64,
            config: &'a ExperimentConfig,
        }
        write_json(&self.path("level.json"), &Level { c0, estimate: est.value, config: &self.cfg })?;
        let last = est.rows.iter().max_by(|a, b| a.0.total_cmp(&b.0)).map_or(f64::NAN, |r| r.2);
        Ok(vec![Check::new("level", "I_V_at_largest_R", last, c0, Relation::RelWithin, self.cfg.tolerances.cv)])
    }

    fn sobolev(&self) -> Result<Vec<Check>> {
        let n = self.spec.dimension();
        #[derive(Serialize)]
        struct Sobolev {
            dimension: usize,
            constant: f64,
            formula: f64,
            rayleigh_quotient: f64,
            relative_gap: f64,
        }
        let formula = sobolev_formula(n)?;
        let rq = sobolev_rayleigh_quotient(n)?;
        let s = Sobolev { dimension: n, constant: sobolev_constant(n)?, formula, rayleigh_quotient: rq, relative_gap: (formula - rq).abs() / formula };
        println!("S = {:.12} (N = {n}); Rayleigh quotient {:.12}; relative gap {:.3e}", s.constant, rq, s.relative_gap);
        write_json(&self.path("sobolev.json"), &s)?;
        Ok(vec![Check::new("sobolev", "oracle_gap", s.relative_gap, self.cfg.tolerances.sobolev, Relation::AtMost, 0.0)])
    }

    fn verify_lemmas(&self) -> Result<Vec<Check>> {
        let selected = |g: &str| self.cfg.lemmas.as_ref().is_none_or(|l| l.iter().any(|x| x == g));
        let needs_profile = LEMMA_GROUPS.iter().any(|g| selected(g) && !matches!(*g, "power" | "superadditivity" | "audit"));
        let profile = if needs_profile { Some(self.profile()?) } else { None };
        let ctx = match &profile {
            Some(p) if ["projection", "landscape", "level"].iter().any(|g| selected(g)) => Some(self.context(p)?),
            _ => None,
        };
        let mut checks = Vec::new();
        for g in LEMMA_GROUPS {
            if !selected(g) {
                continue;
            }
            let p = || profile.as_ref().expect("profile");
            let c = || ctx.as_ref().expect("energy context");
            checks.extend(match g {
                "ground_state" => self.decay(p())?,
                "identities" => self.identities(p())?,
                "interaction" => self.interaction(p())?,
                "power" => self.power()?,
                "vplus" => self.vplus(p())?,
                "projection" => self.projection(c())?,
                "landscape" => self.landscape(c())?,
                "mean_value" => self.mean_value(p())?,
                "superadditivity" => self.superadditivity()?,
                "barycenter" => self.barycenter(p())?,
                "level" => self.level(c())?,
                "audit" => self.audit()?,
                _ => unreachable!(),
            });
        }
        Ok(checks)
    }
}

/// Unknown lemma group names, if any.
pub fn unknown_groups(cfg: &ExperimentConfig) -> Vec<String> {
    cfg.lemmas.iter().flatten().filter(|g| !LEMMA_GROUPS.contains(&g.as_str())).cloned().collect()
}
