//! Experiment configuration, read from TOML.
//!
//! ```toml
//! runs = 200
//! seed = 7
//! dims = [16]
//! sample_counts = [8]
//! nmse_icm = true
//!
//! [[process]]
//! kind = "ar"
//! a = [0.5]
//! sigma2 = 0.64
//!
//! [[estimator]]
//! name = "pgd"
//! order = "auto"
//! ```
//!
//! Unknown keys are rejected.

use std::path::Path;

use anyhow::{bail, Context};
use serde::Deserialize;
use toepcov_core::processes::{ProcessKind, ProcessSpec};

use crate::registry::{EstimatorKind, EstimatorOptions, OrderChoice};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default)]
    pub seed: u64,
    pub dims: Vec<usize>,
    pub sample_counts: Vec<usize>,
    #[serde(default = "yes")]
    pub nmse_cm: bool,
    #[serde(default)]
    pub nmse_icm: bool,
    #[serde(rename = "process")]
    pub processes: Vec<ProcessConfig>,
    #[serde(rename = "estimator")]
    pub estimators: Vec<EstimatorConfig>,
}

fn default_runs() -> usize {
    500
}

fn yes() -> bool {
    true
}

/// One point of the process sweep.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ProcessConfig {
    Ar { a: Vec<f64>, sigma2: f64 },
    Ma { b: Vec<f64>, sigma2: f64 },
    Arma11 { a: f64, b: f64, sigma2: f64 },
    Fbm { h: f64 },
}

impl ProcessConfig {
    pub fn kind(&self) -> ProcessKind {
        match self {
            Self::Ar { a, sigma2 } => ProcessKind::Ar {
                a: a.clone(),
                sigma2: *sigma2,
            },
            Self::Ma { b, sigma2 } => ProcessKind::Ma {
                b: b.clone(),
                sigma2: *sigma2,
            },
            Self::Arma11 { a, b, sigma2 } => ProcessKind::Arma11 {
                a: *a,
                b: *b,
                sigma2: *sigma2,
            },
            Self::Fbm { h } => ProcessKind::Fbm { h: *h },
        }
    }

    pub fn spec(&self, p: usize) -> toepcov_core::Result<ProcessSpec> {
        ProcessSpec::new(self.kind(), p)
    }

    pub fn label(&self) -> String {
        let list = |v: &[f64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        match self {
            Self::Ar { a, sigma2 } => format!("ar(a=[{}] s2={sigma2})", list(a)),
            Self::Ma { b, sigma2 } => format!("ma(b=[{}] s2={sigma2})", list(b)),
            Self::Arma11 { a, b, sigma2 } => format!("arma11(a={a} b={b} s2={sigma2})"),
            Self::Fbm { h } => format!("fbm(h={h})"),
        }
    }
}

/// `"auto"`, `"cv"` or an integer.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum AutoOr {
    Fixed(usize),
    Word(String),
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EstimatorConfig {
    pub name: String,
    /// Column label; defaults to the name.
    pub label: Option<String>,
    /// AR order for GS estimators, bandwidth for banding and tapering.
    pub order: Option<AutoOr>,
    /// Box family id such as `exp(1)`, or `auto`.
    pub family: Option<String>,
    pub rho: Option<f64>,
    pub em_embedding: Option<usize>,
    pub em_max_iter: Option<usize>,
    pub em_tol: Option<f64>,
}

impl EstimatorConfig {
    pub fn named(name: &str) -> Self {
        Self {
            name: name.into(),
            label: None,
            order: None,
            family: None,
            rho: None,
            em_embedding: None,
            em_max_iter: None,
            em_tol: None,
        }
    }

    pub fn kind(&self) -> anyhow::Result<EstimatorKind> {
        EstimatorKind::parse(&self.name).with_context(|| {
            format!(
                "unknown estimator `{}`; known: {}",
                self.name,
                EstimatorKind::ALL.map(|k| k.name()).join(", ")
            )
        })
    }

    pub fn label(&self) -> String {
        self.label.clone().unwrap_or_else(|| self.name.clone())
    }

    pub fn options(&self) -> anyhow::Result<EstimatorOptions> {
        let mut o = EstimatorOptions::default();
        o.order = match &self.order {
            None => OrderChoice::Auto,
            Some(AutoOr::Fixed(w)) => OrderChoice::Fixed(*w),
            Some(AutoOr::Word(w)) if w == "auto" || w == "cv" || w == "bic" => OrderChoice::Auto,
            Some(AutoOr::Word(w)) => bail!(
                "estimator {}: order must be an integer or `auto`, got `{w}`",
                self.name
            ),
        };
        o.family = self.family.clone().filter(|f| f != "auto");
        if let Some(r) = self.rho {
            if !(0.0..=1.0).contains(&r) {
                bail!("estimator {}: rho = {r} outside [0, 1]", self.name);
            }
            o.rho = Some(r);
        }
        if let Some(g) = self.em_embedding {
            o.em_embedding = g;
        }
        if let Some(m) = self.em_max_iter {
            o.em_max_iter = m;
        }
        if let Some(t) = self.em_tol {
            o.em_tol = t;
        }
        Ok(o)
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> anyhow::Result<Self> {
        let cfg: Self = toml::from_str(text).context("invalid experiment config")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.runs == 0 {
            bail!("runs must be at least 1");
        }
        if self.dims.is_empty() || self.dims.contains(&0) {
            bail!("dims must list positive dimensions");
        }
        if self.sample_counts.is_empty() || self.sample_counts.contains(&0) {
            bail!("sample_counts must list positive sample counts");
        }
        if self.processes.is_empty() {
            bail!("at least one [[process]] is required");
        }
        if self.estimators.is_empty() {
            bail!("at least one [[estimator]] is required");
        }
        for p in &self.processes {
            p.spec(self.dims[0])
                .with_context(|| format!("process {}", p.label()))?;
        }
        let mut labels = std::collections::BTreeSet::new();
        for e in &self.estimators {
            e.kind()?;
            e.options()?;
            if !labels.insert(e.label()) {
                bail!("duplicate estimator label `{}`", e.label());
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
runs = 3
seed = 9
dims = [8, 16]
sample_counts = [4]
nmse_icm = true

[[process]]
kind = "ar"
a = [0.5]
sigma2 = 0.64

[[process]]
kind = "fbm"
h = 0.7

[[estimator]]
name = "pgd"
order = "auto"

[[estimator]]
name = "band"
order = 2
"#;

    #[test]
    fn parses() {
        let c = ExperimentConfig::from_toml(SAMPLE).unwrap();
        assert_eq!(c.processes.len(), 2);
        assert_eq!(
            c.estimators[1].options().unwrap().order,
            OrderChoice::Fixed(2)
        );
        assert!(c.nmse_cm);
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = SAMPLE.replace("seed = 9", "sed = 9");
        assert!(ExperimentConfig::from_toml(&bad).is_err());
        let bad = SAMPLE.replace("h = 0.7", "h = 0.7\nhurst = 1");
        assert!(ExperimentConfig::from_toml(&bad).is_err());
        let bad = SAMPLE.replace("name = \"band\"", "name = \"banding\"");
        assert!(ExperimentConfig::from_toml(&bad).is_err());
        let bad = SAMPLE.replace("runs = 3", "runs = 0");
        assert!(ExperimentConfig::from_toml(&bad).is_err());
    }
}
