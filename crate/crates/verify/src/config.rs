//! Suite configuration, read from TOML.

use std::path::Path;

use anyhow::{bail, Context, Result};
use dunkl::quadrature::Tier;
use dunkl::rational::{format_rational, parse_rational};
use dunkl::{Rational, Root, RootSystem};
use serde::{Deserialize, Serialize};

use crate::sampling::{derive_seed, random_kappa};

pub const SUITES: &[&str] = &["identities", "ibp", "harmonics", "oracle", "isometry", "uncertainty", "eigen"];

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RootSystemSpec {
    /// No roots: the unweighted measure.
    Trivial {
        dim: usize,
    },
    Z2d {
        kappa: Vec<String>,
    },
    /// `Z_2^d` with each `kappa_i` drawn from `[0, 2]` using the suite seed.
    RandomZ2d {
        dim: usize,
    },
    Hyperoctahedral {
        dim: usize,
        kappa: [String; 2],
    },
    General {
        dim: usize,
        roots: Vec<Vec<String>>,
        multiplicities: Vec<String>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
enum OneOrMany {
    One(RootSystemSpec),
    Many(Vec<RootSystemSpec>),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(alias = "root_system")]
    root_systems: OneOrMany,
    #[serde(default = "default_degree_cap")]
    degree_cap: u32,
    #[serde(default = "default_trials")]
    trials: usize,
    #[serde(default = "default_uncertainty_trials")]
    uncertainty_trials: usize,
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_tiers")]
    tiers_allowed: Vec<String>,
    #[serde(default = "default_mc_samples")]
    mc_samples: usize,
    #[serde(default = "default_oracle_cases")]
    oracle_cases: usize,
    #[serde(default = "default_direction_samples")]
    direction_samples: usize,
    #[serde(default = "default_mu")]
    mu: Vec<String>,
    #[serde(default = "default_suites")]
    suites: Vec<String>,
}

fn default_degree_cap() -> u32 {
    6
}
fn default_trials() -> usize {
    50
}
fn default_uncertainty_trials() -> usize {
    100
}
fn default_tiers() -> Vec<String> {
    vec!["A".into(), "B".into(), "C".into()]
}
fn default_mc_samples() -> usize {
    1_000_000
}
fn default_oracle_cases() -> usize {
    30
}
fn default_direction_samples() -> usize {
    64
}
fn default_mu() -> Vec<String> {
    vec!["1/2".into(), "1".into()]
}
fn default_suites() -> Vec<String> {
    SUITES.iter().map(|s| s.to_string()).collect()
}

/// A root system built from its spec, with a stable label for reports.
#[derive(Clone, Debug)]
pub struct Configured {
    pub label: String,
    pub system: RootSystem,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SuiteConfig {
    pub root_systems: Vec<RootSystemSpec>,
    pub degree_cap: u32,
    pub trials: usize,
    pub uncertainty_trials: usize,
    pub seed: u64,
    pub tiers_allowed: Vec<String>,
    pub mc_samples: usize,
    pub oracle_cases: usize,
    pub direction_samples: usize,
    pub mu: Vec<String>,
    pub suites: Vec<String>,
}

impl SuiteConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).context("invalid config")?;
        let root_systems = match raw.root_systems {
            OneOrMany::One(s) => vec![s],
            OneOrMany::Many(v) => v,
        };
        let cfg = SuiteConfig {
            root_systems,
            degree_cap: raw.degree_cap,
            trials: raw.trials,
            uncertainty_trials: raw.uncertainty_trials,
            seed: raw.seed,
            tiers_allowed: raw.tiers_allowed,
            mc_samples: raw.mc_samples,
            oracle_cases: raw.oracle_cases,
            direction_samples: raw.direction_samples,
            mu: raw.mu,
            suites: raw.suites,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 || self.uncertainty_trials < 1 {
            bail!("trials must be at least 1");
        }
        if self.degree_cap < 2 {
            bail!("degree_cap must be at least 2");
        }
        if self.mc_samples < 1000 {
            bail!("mc_samples must be at least 1000");
        }
        if self.root_systems.is_empty() {
            bail!("at least one root system is required");
        }
        for s in &self.suites {
            if !SUITES.contains(&s.as_str()) {
                bail!("unknown suite {s:?}; known suites: {}", SUITES.join(", "));
            }
        }
        for t in &self.tiers_allowed {
            parse_tier(t)?;
        }
        for m in self.mus()? {
            if m < Rational::from_integer(0.into()) {
                bail!("mu must be nonnegative");
            }
        }
        self.build_systems()?;
        Ok(())
    }

    pub fn mus(&self) -> Result<Vec<Rational>> {
        self.mu.iter().map(|m| Ok(parse_rational(m)?)).collect()
    }

    pub fn tier_allowed(&self, tier: Tier) -> bool {
        self.tiers_allowed.iter().any(|t| parse_tier(t).ok() == Some(tier))
    }

    pub fn build_systems(&self) -> Result<Vec<Configured>> {
        self.root_systems
            .iter()
            .enumerate()
            .map(|(k, spec)| build(spec, derive_seed(self.seed, &["root-system", &k.to_string()])))
            .collect()
    }
}

fn parse_tier(t: &str) -> Result<Tier> {
    Ok(match t {
        "A" => Tier::A,
        "B" => Tier::B,
        "C" => Tier::C,
        _ => bail!("unknown tier {t:?}"),
    })
}

fn rationals(v: &[String]) -> Result<Vec<Rational>> {
    v.iter().map(|s| Ok(parse_rational(s)?)).collect()
}

fn list(v: &[Rational]) -> String {
    v.iter().map(format_rational).collect::<Vec<_>>().join(",")
}

fn build(spec: &RootSystemSpec, seed: u64) -> Result<Configured> {
    Ok(match spec {
        RootSystemSpec::Trivial { dim } => {
            if *dim == 0 {
                bail!("dimension must be positive");
            }
            Configured { label: format!("trivial-d{dim}"), system: RootSystem::trivial(*dim) }
        }
        RootSystemSpec::Z2d { kappa } => {
            let k = rationals(kappa)?;
            Configured { label: format!("z2d[{}]", list(&k)), system: RootSystem::z2d(&k)? }
        }
        RootSystemSpec::RandomZ2d { dim } => {
            let k = random_kappa(seed, *dim);
            Configured { label: format!("z2d[{}]", list(&k)), system: RootSystem::z2d(&k)? }
        }
        RootSystemSpec::Hyperoctahedral { dim, kappa } => {
            let k = rationals(kappa)?;
            Configured {
                label: format!("b{dim}[{}]", list(&k)),
                system: RootSystem::hyperoctahedral(*dim, k[0].clone(), k[1].clone())?,
            }
        }
        RootSystemSpec::General { dim, roots, multiplicities } => {
            if roots.len() != multiplicities.len() {
                bail!("roots and multiplicities differ in length");
            }
            let mut built = Vec::new();
            let mut parts = Vec::new();
            for (r, m) in roots.iter().zip(multiplicities) {
                let v = rationals(r)?;
                let m = parse_rational(m)?;
                parts.push(format!("({}):{}", list(&v), format_rational(&m)));
                built.push(Root::new(v, m)?);
            }
            Configured { label: format!("general-d{dim}[{}]", parts.join(";")), system: RootSystem::new(*dim, built)? }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_defaults() {
        let cfg = SuiteConfig::from_toml("[root_system]\nkind = \"trivial\"\ndim = 3\n").unwrap();
        assert_eq!(cfg.degree_cap, 6);
        assert_eq!(cfg.trials, 50);
        assert_eq!(cfg.mc_samples, 1_000_000);
        assert_eq!(cfg.direction_samples, 64);
        assert_eq!(cfg.suites.len(), SUITES.len());
        assert_eq!(cfg.build_systems().unwrap()[0].label, "trivial-d3");
    }

    #[test]
    fn parses_lists() {
        let text = r#"
            seed = 9
            suites = ["identities"]
            [[root_systems]]
            kind = "z2d"
            kappa = ["1/2", "0", "2"]
            [[root_systems]]
            kind = "general"
            dim = 2
            roots = [["1", "-1"]]
            multiplicities = ["1"]
            [[root_systems]]
            kind = "random-z2d"
            dim = 4
        "#;
        let cfg = SuiteConfig::from_toml(text).unwrap();
        let systems = cfg.build_systems().unwrap();
        assert_eq!(systems[0].label, "z2d[1/2,0,2]");
        assert_eq!(systems[1].label, "general-d2[(1,-1):1]");
        assert_eq!(systems[2].system.dim(), 4);
        let again = SuiteConfig::from_toml(text).unwrap().build_systems().unwrap();
        assert_eq!(systems[2].label, again[2].label);
    }

    #[test]
    fn rejects_bad_values() {
        let base = "[root_system]\nkind = \"trivial\"\ndim = 2\n";
        assert!(SuiteConfig::from_toml(&format!("trials = 0\n{base}")).is_err());
        assert!(SuiteConfig::from_toml(&format!("degree_cap = 1\n{base}")).is_err());
        assert!(SuiteConfig::from_toml(&format!("mc_samples = 10\n{base}")).is_err());
        assert!(SuiteConfig::from_toml(&format!("suites = [\"nope\"]\n{base}")).is_err());
        assert!(SuiteConfig::from_toml("[root_system]\nkind = \"z2d\"\nkappa = [\"x\"]\n").is_err());
    }
}
