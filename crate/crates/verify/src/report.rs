//! Running the registry and assembling the JSON report.

use std::collections::BTreeMap;
use std::time::Instant;

use anyhow::Result;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::checks::{CheckDef, Env, Outcome, Scope, Status, Witness, REGISTRY};
use crate::config::{Configured, SuiteConfig};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check_id: String,
    pub equation: String,
    pub suite: String,
    pub config: String,
    pub status: Status,
    pub trials: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Witness>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub total: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub tool_version: &'static str,
    pub config: SuiteConfig,
    pub summary: Summary,
    pub checks: Vec<CheckRecord>,
    /// Wall-clock milliseconds per `check_id@config`; the only
    /// nondeterministic part of the report.
    pub timings: BTreeMap<String, f64>,
}

impl Report {
    pub fn failed(&self) -> bool {
        self.summary.fail > 0
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// The report without timings, for comparing runs.
    pub fn deterministic_value(&self) -> Result<Value> {
        let mut v = serde_json::to_value(self)?;
        if let Some(obj) = v.as_object_mut() {
            obj.remove("timings");
        }
        Ok(v)
    }
}

struct Job<'a> {
    def: &'static CheckDef,
    system: Option<&'a Configured>,
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    let systems = cfg.build_systems()?;
    let mus = cfg.mus()?;
    let mut jobs = Vec::new();
    for def in REGISTRY.iter().filter(|d| cfg.suites.iter().any(|s| s == d.suite)) {
        match def.scope {
            Scope::Global => jobs.push(Job { def, system: None }),
            Scope::PerSystem => jobs.extend(systems.iter().map(|s| Job { def, system: Some(s) })),
        }
    }
    let results: Vec<(CheckRecord, f64)> = jobs
        .par_iter()
        .map(|job| {
            let env = Env { cfg, system: job.system, mus: mus.clone(), id: job.def.id };
            let start = Instant::now();
            let out: Outcome = (job.def.run)(&env);
            let ms = start.elapsed().as_secs_f64() * 1e3;
            let record = CheckRecord {
                check_id: job.def.id.into(),
                equation: job.def.equation.into(),
                suite: job.def.suite.into(),
                config: env.label().into(),
                status: out.status,
                trials: out.trials,
                reason: out.reason,
                counterexample: out.counterexample,
                details: out.details,
            };
            (record, ms)
        })
        .collect();

    let mut checks = Vec::with_capacity(results.len());
    let mut timings = BTreeMap::new();
    let mut summary = Summary::default();
    for (rec, ms) in results {
        match rec.status {
            Status::Pass => summary.pass += 1,
            Status::Fail => summary.fail += 1,
            Status::Skipped => summary.skipped += 1,
        }
        summary.total += 1;
        timings.insert(format!("{}@{}", rec.check_id, rec.config), ms);
        checks.push(rec);
    }
    checks.sort_by(|a, b| (&a.check_id, &a.config).cmp(&(&b.check_id, &b.config)));
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        config: cfg.clone(),
        summary,
        checks,
        timings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_is_reproducible() {
        let cfg = SuiteConfig::from_toml(
            "trials = 3\nsuites = [\"identities\"]\n[root_system]\nkind = \"z2d\"\nkappa = [\"1/2\", \"1\"]\n",
        )
        .unwrap();
        let a = run_suite(&cfg).unwrap();
        let b = run_suite(&cfg).unwrap();
        assert_eq!(a.deterministic_value().unwrap(), b.deterministic_value().unwrap());
        assert_eq!(a.summary.fail, 0, "{}", a.to_json().unwrap());
        assert_eq!(a.summary.total, a.checks.len());
    }
}
