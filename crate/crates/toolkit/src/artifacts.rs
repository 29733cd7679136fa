//! CSV and JSON artifacts: number formatting, scan tables and the profile file.

use std::fs;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use serde::Serialize;
use zeromass::asymptotics::{ScanReport, ScanRow};
use zeromass::{NonlinearitySpec, RadialProfile};

/// 17 significant digits: enough to round-trip any `f64`.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn write_table(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub const SCAN_HEADER: [&str; 9] = ["R", "lambda", "s", "T", "value", "aux", "error", "seed", "flagged"];

pub fn scan_record(row: &ScanRow) -> Vec<String> {
    vec![
        num(row.r),
        opt(row.lambda),
        opt(row.s),
        opt(row.t),
        num(row.value),
        opt(row.aux),
        num(row.error),
        row.seed.map(|s| s.to_string()).unwrap_or_default(),
        row.flagged.to_string(),
    ]
}

#[derive(Serialize)]
struct Sidecar<'a, C: Serialize> {
    kind: zeromass::asymptotics::ScanKind,
    dimension: usize,
    y0: &'a [f64],
    y: &'a [f64],
    fits: &'a [zeromass::asymptotics::NamedFit],
    margins: &'a [zeromass::asymptotics::Margin],
    flagged: bool,
    mc_seeds: Vec<u64>,
    config: &'a C,
}

/// `<stem>.csv` with one line per row and `<stem>.json` with fits, margins,
/// the Monte Carlo seeds and the configuration.
pub fn write_scan<C: Serialize>(dir: &Path, stem: &str, report: &ScanReport, config: &C) -> Result<()> {
    write_table(&dir.join(format!("{stem}.csv")), &SCAN_HEADER, report.rows.iter().map(scan_record))?;
    let mut mc_seeds: Vec<u64> = report.rows.iter().filter_map(|r| r.seed).collect();
    mc_seeds.dedup();
    let side = Sidecar {
        kind: report.kind,
        dimension: report.dimension,
        y0: &report.y0,
        y: &report.y,
        fits: &report.fits,
        margins: &report.margins,
        flagged: report.flagged(),
        mc_seeds,
        config,
    };
    write_json(&dir.join(format!("{stem}.json")), &side)
}

/// Header rows `N, p, q, amplitude, tail_c`, then the columns `r,u,du`.
pub fn write_profile(path: &Path, profile: &RadialProfile, spec: &NonlinearitySpec) -> Result<()> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_path(path).with_context(|| format!("writing {}", path.display()))?;
    w.write_record(["N", &profile.dimension().to_string()])?;
    w.write_record(["p", &num(spec.p())])?;
    w.write_record(["q", &num(spec.q())])?;
    w.write_record(["amplitude", &num(profile.amplitude())])?;
    w.write_record(["tail_c", &num(profile.tail_c())])?;
    w.write_record(["r", "u", "du"])?;
    for ((r, u), du) in profile.r().iter().zip(profile.u()).zip(profile.du()) {
        w.write_record([num(*r), num(*u), num(*du)])?;
    }
    w.flush()?;
    Ok(())
}

fn field(rec: &csv::StringRecord, i: usize) -> Result<f64> {
    let s = rec.get(i).context("missing column")?;
    s.trim().parse::<f64>().with_context(|| format!("not a number: {s:?}"))
}

/// Read a profile written by [`write_profile`]; its header must match `spec`.
pub fn read_profile(path: &Path, spec: &NonlinearitySpec) -> Result<RadialProfile> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_path(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut records = rdr.records();
    let mut header = |name: &str| -> Result<f64> {
        let rec = records.next().with_context(|| format!("missing header row {name}"))??;
        ensure!(rec.get(0) == Some(name), "expected header row {name}, found {:?}", rec.get(0));
        field(&rec, 1)
    };
    let n = header("N")?;
    let p = header("p")?;
    let q = header("q")?;
    let amplitude = header("amplitude")?;
    let tail_c = header("tail_c")?;
    if n != spec.dimension() as f64 || p != spec.p() || q != spec.q() {
        bail!("profile is for (N, p, q) = ({n}, {p}, {q}), configuration asks for ({}, {}, {})", spec.dimension(), spec.p(), spec.q());
    }
    let cols = records.next().context("missing column header")??;
    ensure!(cols.iter().collect::<Vec<_>>() == ["r", "u", "du"], "expected columns r,u,du");
    let (mut r, mut u, mut du) = (Vec::new(), Vec::new(), Vec::new());
    for rec in records {
        let rec = rec?;
        r.push(field(&rec, 0)?);
        u.push(field(&rec, 1)?);
        du.push(field(&rec, 2)?);
    }
    ensure!(u.first() == Some(&amplitude), "amplitude header does not match u(0)");
    Ok(RadialProfile::from_samples(spec, r, u, du, tail_c)?)
}
