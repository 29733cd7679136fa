//! Batch experiments on top of [`zeromass`]: configuration, orchestration
//! and CSV/JSON artifacts. The `toolkit` binary is a thin wrapper around
//! [`execute`].

pub mod artifacts;
pub mod cache;
pub mod checks;
pub mod config;
pub mod tasks;

use std::path::PathBuf;

use serde::Serialize;
use serde_json::json;

use crate::artifacts::{read_profile, write_json};
use crate::checks::{render, write_checks, Check};
use crate::config::{ExperimentConfig, SchemaError, Task};
use crate::tasks::{unknown_groups, Run};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_SCHEMA: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

#[derive(Debug, Clone)]
pub struct Invocation {
    pub task: Task,
    pub config: PathBuf,
    pub overrides: Vec<String>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    task: Task,
    toolkit_version: &'a str,
    zeromass_version: &'a str,
    seed: u64,
    exit_code: i32,
    checks: usize,
    failed: usize,
}

fn report(code: i32, task: Task, message: &str, failed: &[Check]) -> serde_json::Value {
    let status = match code {
        EXIT_SCHEMA => "schema_error",
        EXIT_NUMERICAL => "numerical_failure",
        EXIT_INVARIANT => "invariant_failure",
        _ => "io_error",
    };
    json!({ "status": status, "exit_code": code, "task": task, "message": message, "failed_checks": failed })
}

fn classify(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<zeromass::Error>() {
        Some(zeromass::Error::ConsistencyFailure { .. }) => EXIT_INVARIANT,
        Some(_) => EXIT_NUMERICAL,
        None if err.downcast_ref::<std::io::Error>().is_some() || err.downcast_ref::<csv::Error>().is_some() => EXIT_IO,
        None => EXIT_NUMERICAL,
    }
}

/// Resolve the configuration and build everything that can be checked
/// without numerics. Nothing touches the disk before this succeeds.
fn prepare(inv: &Invocation) -> Result<Run, SchemaError> {
    let mut cfg = ExperimentConfig::load(&inv.config, &inv.overrides)?;
    if let Some(t) = cfg.task {
        if t != inv.task {
            return Err(SchemaError(format!("configuration is for task {t}, invoked as {}", inv.task)));
        }
    }
    cfg.task = Some(inv.task);
    if let Some(out) = &inv.out {
        cfg.out = Some(out.clone());
    }
    let seed = inv.seed.or(cfg.seed).unwrap_or(cfg.quadrature.seed);
    cfg.seed = Some(seed);
    cfg.quadrature.seed = seed;
    cfg.validate(inv.task)?;
    let unknown = unknown_groups(&cfg);
    if !unknown.is_empty() {
        return Err(SchemaError(format!("unknown lemma groups {unknown:?}; known: {:?}", tasks::LEMMA_GROUPS)));
    }
    let spec = cfg.nonlinearity_spec()?;
    let potential = cfg.potential_spec()?;
    let (y0, y) = cfg.anchors()?;
    let preloaded = match &cfg.profile {
        Some(p) if !matches!(inv.task, Task::Audit | Task::Sobolev) => {
            Some(read_profile(p, &spec).map_err(|e| SchemaError(format!("profile {}: {e:#}", p.display())))?)
        }
        _ => None,
    };
    let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from("toolkit-out"));
    Ok(Run { cfg, spec, potential, y0, y, out, preloaded })
}

/// Run one task and return the process exit status. Failures print a
/// one-line JSON report on stderr; once the output directory exists the
/// report is also written to `error.json`.
pub fn execute(inv: &Invocation) -> i32 {
    let run = match prepare(inv) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("{}", report(EXIT_SCHEMA, inv.task, &e.0, &[]));
            return EXIT_SCHEMA;
        }
    };
    let seed = run.cfg.quadrature.seed;
    let fail = |code: i32, msg: String, failed: &[Check]| {
        let rep = report(code, inv.task, &msg, failed);
        eprintln!("{rep}");
        let _ = write_json(&run.out.join("error.json"), &rep);
        code
    };
    if let Err(e) = std::fs::create_dir_all(&run.out)
        .map_err(anyhow::Error::from)
        .and_then(|_| write_json(&run.out.join("config.json"), &run.cfg))
    {
        eprintln!("{}", report(EXIT_IO, inv.task, &format!("{e:#}"), &[]));
        return EXIT_IO;
    }
    let _ = std::fs::remove_file(run.out.join("error.json"));
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = inv.threads {
        builder = builder.num_threads(n);
    }
    let outcome = match builder.build() {
        Ok(pool) => pool.install(|| run.execute(inv.task)),
        Err(e) => Err(e.into()),
    };
    let (code, checks) = match outcome {
        Ok(checks) => {
            let failed: Vec<Check> = checks.iter().filter(|c| !c.pass).cloned().collect();
            print!("{}", render(&checks));
            if let Err(e) = write_checks(&run.out.join("checks.csv"), &checks) {
                return fail(EXIT_IO, format!("{e:#}"), &[]);
            }
            if failed.is_empty() {
                (EXIT_OK, checks)
            } else {
                let msg = format!("{} of {} checks failed", failed.len(), checks.len());
                (fail(EXIT_INVARIANT, msg, &failed), checks)
            }
        }
        Err(e) => (fail(classify(&e), format!("{e:#}"), &[]), Vec::new()),
    };
    let manifest = Manifest {
        task: inv.task,
        toolkit_version: VERSION,
        zeromass_version: zeromass::VERSION,
        seed,
        exit_code: code,
        checks: checks.len(),
        failed: checks.iter().filter(|c| !c.pass).count(),
    };
    if write_json(&run.out.join("run.json"), &manifest).is_err() && code == EXIT_OK {
        return EXIT_IO;
    }
    code
}
