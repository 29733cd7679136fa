//! Pass/fail rows attached to every task.

use std::path::Path;

use anyhow::Result;
use serde::Serialize;

use crate::artifacts::{num, write_table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    /// `|computed - predicted| <= tolerance`.
    Within,
    /// `|computed - predicted| <= tolerance |predicted|`.
    RelWithin,
    Below,
    Above,
    AtMost,
    AtLeast,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Within => "|x-p|<=tol",
            Relation::RelWithin => "|x-p|<=tol*|p|",
            Relation::Below => "x<p",
            Relation::Above => "x>p",
            Relation::AtMost => "x<=p",
            Relation::AtLeast => "x>=p",
        }
    }

    fn holds(self, x: f64, p: f64, tol: f64) -> bool {
        match self {
            Relation::Within => (x - p).abs() <= tol,
            Relation::RelWithin => (x - p).abs() <= tol * p.abs(),
            Relation::Below => x < p,
            Relation::Above => x > p,
            Relation::AtMost => x <= p,
            Relation::AtLeast => x >= p,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub group: String,
    pub name: String,
    pub computed: f64,
    pub predicted: f64,
    pub relation: Relation,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(group: &str, name: &str, computed: f64, predicted: f64, relation: Relation, tolerance: f64) -> Self {
        let pass = computed.is_finite() && relation.holds(computed, predicted, tolerance);
        Self { group: group.into(), name: name.into(), computed, predicted, relation, tolerance, pass }
    }

    pub fn flag(group: &str, name: &str, ok: bool) -> Self {
        Self::new(group, name, if ok { 1.0 } else { 0.0 }, 1.0, Relation::Within, 0.0)
    }
}

pub fn write_checks(path: &Path, checks: &[Check]) -> Result<()> {
    let header = ["group", "check", "computed", "predicted", "relation", "tolerance", "pass"];
    write_table(
        path,
        &header,
        checks.iter().map(|c| {
            vec![
                c.group.clone(),
                c.name.clone(),
                num(c.computed),
                num(c.predicted),
                c.relation.symbol().to_string(),
                num(c.tolerance),
                c.pass.to_string(),
            ]
        }),
    )
}

pub fn render(checks: &[Check]) -> String {
    let mut s = String::new();
    for c in checks {
        s.push_str(&format!(
            "{:<4} {:<18} {:<28} {:>14.6e}  {} {:.6e} (tol {:.1e})\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.group,
            c.name,
            c.computed,
            c.relation.symbol(),
            c.predicted,
            c.tolerance
        ));
    }
    s
}
