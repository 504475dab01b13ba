//! The check registry and the shared trial machinery.

use std::collections::BTreeMap;

use anyhow::Result;
use dunkl::quadrature::{Tier, WeightedDomain};
use dunkl::{MultiPoly, Rational, RootSystem};
use serde::Serialize;
use serde_json::Value;

use crate::config::{Configured, SuiteConfig};
use crate::sampling::{derive_seed, sample_polynomial, Constraints};

mod domains;
mod harmonics;
mod ibp;
mod identities;
mod oracle;
mod uncertainty;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub seed: u64,
    pub polynomials: Vec<String>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Outcome {
    pub status: Status,
    pub trials: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Witness>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
}

impl Outcome {
    pub fn skipped(reason: impl Into<String>) -> Self {
        Outcome {
            status: Status::Skipped,
            trials: 0,
            reason: Some(reason.into()),
            counterexample: None,
            details: BTreeMap::new(),
        }
    }
}

pub type Details = BTreeMap<String, Value>;

/// Where a check applies: once per configured root system, or once overall
/// with its own randomized cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    PerSystem,
    Global,
}

pub struct CheckDef {
    pub id: &'static str,
    /// An equation number such as `"3.13"`, a named result, or `"plumbing"`.
    pub equation: &'static str,
    pub suite: &'static str,
    pub scope: Scope,
    pub run: fn(&Env) -> Outcome,
}

pub struct Env<'a> {
    pub cfg: &'a SuiteConfig,
    pub system: Option<&'a Configured>,
    pub mus: Vec<Rational>,
    pub id: &'static str,
}

impl Env<'_> {
    pub fn rs(&self) -> &RootSystem {
        &self.system.expect("per-system check").system
    }

    pub fn dim(&self) -> usize {
        self.rs().dim()
    }

    pub fn label(&self) -> &str {
        self.system.map(|s| s.label.as_str()).unwrap_or("global")
    }

    pub fn seed(&self, trial: usize) -> u64 {
        derive_seed(self.cfg.seed, &[self.id, self.label(), &trial.to_string()])
    }

    pub fn poly(&self, seed: u64, c: &Constraints) -> Result<MultiPoly> {
        sample_polynomial(seed, self.dim(), self.cfg.degree_cap, c)
    }

    pub fn poly_deg(&self, seed: u64, degree: u32, c: &Constraints) -> Result<MultiPoly> {
        sample_polynomial(seed, self.dim(), degree, c)
    }

    /// `Err` holds the skip outcome when the domain has no permitted exact route.
    pub fn exact(&self, dom: &WeightedDomain) -> std::result::Result<(), Outcome> {
        let tier = dom.tier();
        if tier == Tier::C {
            return Err(Outcome::skipped("no exact integration for this weight (tier C)"));
        }
        if !self.cfg.tier_allowed(tier) {
            return Err(Outcome::skipped(format!("tier {tier:?} not allowed by config")));
        }
        Ok(())
    }
}

pub fn witness(seed: u64, polys: &[&MultiPoly], note: impl Into<String>) -> Witness {
    Witness { seed, polynomials: polys.iter().map(|p| p.to_string()).collect(), note: note.into() }
}

/// `None` when `ok`, else a witness.
pub fn expect(ok: bool, seed: u64, polys: &[&MultiPoly], note: impl Into<String>) -> Option<Witness> {
    if ok {
        None
    } else {
        Some(witness(seed, polys, note))
    }
}

/// Runs `n` trials, stopping at the first counterexample. Tier errors skip
/// the check; any other error fails it.
pub fn run_trials<F>(env: &Env, n: usize, mut body: F) -> Outcome
where
    F: FnMut(u64, &mut Details) -> Result<Option<Witness>>,
{
    let mut details = Details::new();
    for t in 0..n {
        let seed = env.seed(t);
        match body(seed, &mut details) {
            Ok(None) => {}
            Ok(Some(w)) => {
                return Outcome { status: Status::Fail, trials: t + 1, reason: None, counterexample: Some(w), details };
            }
            Err(e) => {
                if let Some(dunkl::Error::UnsupportedTier(msg)) = e.downcast_ref::<dunkl::Error>() {
                    return Outcome::skipped(format!("unsupported tier: {msg}"));
                }
                return Outcome {
                    status: Status::Fail,
                    trials: t + 1,
                    reason: Some(format!("{e:#}")),
                    counterexample: Some(Witness { seed, polynomials: Vec::new(), note: "error".into() }),
                    details,
                };
            }
        }
    }
    Outcome { status: Status::Pass, trials: n, reason: None, counterexample: None, details }
}

/// Keeps the smallest value seen under `key`.
pub fn record_min(details: &mut Details, key: &str, v: f64) {
    let cur = details.get(key).and_then(Value::as_f64);
    if cur.is_none_or(|c| v < c) {
        details.insert(key.into(), Value::from(v));
    }
}

pub fn count(details: &mut Details, key: &str) {
    let cur = details.get(key).and_then(Value::as_u64).unwrap_or(0);
    details.insert(key.into(), Value::from(cur + 1));
}

macro_rules! check {
    ($id:literal, $eq:literal, $suite:literal, $scope:ident, $f:path) => {
        CheckDef { id: $id, equation: $eq, suite: $suite, scope: Scope::$scope, run: $f }
    };
}

pub static REGISTRY: &[CheckDef] = &[
    check!("eq-2.2", "2.2", "identities", PerSystem, identities::eq_2_2),
    check!("eq-2.3", "2.3", "identities", PerSystem, identities::eq_2_3),
    check!("eq-2.4", "2.4", "identities", PerSystem, identities::eq_2_4),
    check!("eq-2.5", "2.5", "identities", PerSystem, identities::eq_2_5),
    check!("delta-h-explicit", "2.5", "identities", PerSystem, identities::delta_h_explicit),
    check!("dunkl-commute", "unnumbered", "identities", PerSystem, identities::commutativity),
    check!("root-scaling", "plumbing", "identities", PerSystem, identities::root_scaling),
    check!("eq-3.1", "3.1", "identities", PerSystem, identities::eq_3_1),
    check!("eq-3.2", "3.2", "identities", PerSystem, identities::eq_3_2),
    check!("eq-3.3", "3.3", "identities", PerSystem, identities::eq_3_3),
    check!("eq-3.4", "3.4", "identities", PerSystem, identities::eq_3_4),
    check!("eq-3.6", "3.6", "identities", PerSystem, identities::eq_3_6),
    check!("eq-3.8", "3.8", "identities", PerSystem, identities::eq_3_8),
    check!("eq-3.9", "3.9", "identities", PerSystem, identities::eq_3_9),
    check!("eq-3.11", "3.11", "identities", PerSystem, identities::eq_3_11),
    check!("eq-3.12", "3.12", "identities", PerSystem, identities::eq_3_12),
    check!("eq-3.13", "3.13", "identities", PerSystem, identities::eq_3_13),
    check!("eq-3.7", "3.7", "ibp", PerSystem, ibp::eq_3_7),
    check!("eq-3.10", "3.10", "ibp", PerSystem, ibp::eq_3_10),
    check!("group-invariance", "plumbing", "ibp", PerSystem, ibp::group_invariance),
    check!("eq-2.8", "2.8", "harmonics", PerSystem, harmonics::eq_2_8),
    check!("eq-2.9", "2.9", "harmonics", PerSystem, harmonics::eq_2_9),
    check!("parseval", "unnumbered", "harmonics", PerSystem, harmonics::parseval),
    check!("proj-self-adjoint", "unnumbered", "harmonics", PerSystem, harmonics::self_adjoint),
    check!("cor-2.11", "Cor. 2.11", "harmonics", PerSystem, harmonics::cor_2_11),
    check!("moments-mc", "plumbing", "oracle", Global, oracle::moments_mc),
    check!("moments-golden", "plumbing", "oracle", Global, oracle::moments_golden),
    check!("half-shift-mc", "plumbing", "oracle", Global, oracle::half_shift_mc),
    check!("eq-5.1", "5.1", "oracle", Global, oracle::eq_5_1),
    check!("eq-6.1", "6.1", "oracle", Global, oracle::eq_6_1),
    check!("eq-6.2", "6.2", "oracle", Global, oracle::eq_6_2),
    check!("eq-5.2", "5.2", "isometry", PerSystem, domains::eq_5_2),
    check!("eq-6.4", "6.4", "isometry", PerSystem, domains::eq_6_4),
    check!("triple-norm-lift", "5.3", "isometry", PerSystem, domains::triple_norm_lift),
    check!("angular-gradient", "5.3", "isometry", PerSystem, domains::angular_gradient),
    check!("eq-6.3", "6.3", "isometry", PerSystem, domains::eq_6_3),
    check!("rotation-invariance", "5.4", "isometry", PerSystem, domains::rotation_invariance),
    check!("symmetrize-idempotent", "plumbing", "isometry", PerSystem, domains::symmetrize_idempotent),
    check!("distance-ball", "plumbing", "isometry", PerSystem, domains::distance_ball),
    check!("distance-simplex", "plumbing", "isometry", PerSystem, domains::distance_simplex),
    check!("cor-5.4-pointwise", "Cor. 5.4", "isometry", PerSystem, domains::cor_5_4_pointwise),
    check!("constants", "4.1", "uncertainty", Global, uncertainty::constants),
    check!("thm-4.1", "4.1", "uncertainty", PerSystem, uncertainty::thm_4_1),
    check!("thm-4.1-spectral", "2.8", "uncertainty", PerSystem, uncertainty::spectral_chain),
    check!("eq-4.2", "4.2", "uncertainty", PerSystem, uncertainty::eq_4_2),
    check!("eq-4.3", "4.3", "uncertainty", PerSystem, uncertainty::eq_4_3),
    check!("eq-4.4", "4.4", "uncertainty", PerSystem, uncertainty::eq_4_4),
    check!("thm-5.1", "5.3", "uncertainty", PerSystem, uncertainty::thm_5_1),
    check!("thm-5.2", "5.4", "uncertainty", PerSystem, uncertainty::thm_5_2),
    check!("cor-5.4", "Cor. 5.4", "uncertainty", PerSystem, uncertainty::cor_5_4),
    check!("thm-6.1", "Thm 6.1", "uncertainty", PerSystem, uncertainty::thm_6_1),
    check!("thm-6.2", "Thm 6.2", "uncertainty", PerSystem, uncertainty::thm_6_2),
    check!("eq-5.5", "5.5", "eigen", PerSystem, uncertainty::eq_5_5),
];

/// Equations the registry is expected to cover.
pub const REQUIRED_EQUATIONS: &[&str] = &[
    "2.2", "2.3", "2.4", "2.5", "2.8", "2.9", "3.1", "3.2", "3.3", "3.4", "3.6", "3.7", "3.8", "3.9", "3.10", "3.11",
    "3.12", "3.13", "4.1", "4.2", "4.3", "4.4", "5.1", "5.2", "5.3", "5.4", "5.5", "6.2", "6.3", "6.4",
];

pub fn find(id: &str) -> Option<&'static CheckDef> {
    REGISTRY.iter().find(|c| c.id == id)
}

/// Equation -> check ids, including required equations with no check.
pub fn coverage() -> BTreeMap<String, Vec<&'static str>> {
    let mut map: BTreeMap<String, Vec<&'static str>> = BTreeMap::new();
    for eq in REQUIRED_EQUATIONS {
        map.entry(eq.to_string()).or_default();
    }
    for c in REGISTRY {
        map.entry(c.equation.to_string()).or_default().push(c.id);
    }
    map
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<_> = REGISTRY.iter().map(|c| c.id).collect();
        ids.sort_unstable();
        let n = ids.len();
        ids.dedup();
        assert_eq!(ids.len(), n);
    }

    #[test]
    fn every_required_equation_is_covered() {
        let cov = coverage();
        for eq in REQUIRED_EQUATIONS {
            assert!(!cov[*eq].is_empty(), "equation {eq} has no check");
        }
    }

    #[test]
    fn suites_are_known() {
        for c in REGISTRY {
            assert!(crate::config::SUITES.contains(&c.suite), "{}", c.id);
        }
    }
}
