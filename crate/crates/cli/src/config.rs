//! Experiment configuration: one JSON document, optionally overridden by flags.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use dynsis::netmodel::{
    complete, gen_barabasi_albert, gen_gilbert, gen_regular, gen_watts_strogatz, load_edge_list,
    star,
};
use dynsis::switching::SwitchingPolicy;
use dynsis::{Graph, NormKind};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelSource,
    #[serde(default)]
    pub policy: PolicySpec,
    pub epidemic: EpidemicSpec,
    pub run: RunSpec,
    #[serde(default)]
    pub analysis: AnalysisSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

/// Where the graphs come from. Being an enum, exactly one source is present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSource {
    Generate { graphs: Vec<GeneratorSpec> },
    /// Paths are relative to the config file's directory.
    EdgeLists { paths: Vec<PathBuf> },
    DynamicGilbert { n: usize, p: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorSpec {
    Regular { n: usize, k: usize, seed: u64 },
    WattsStrogatz { n: usize, k: usize, rewire: f64, seed: u64 },
    BarabasiAlbert { n: usize, m: usize, seed: u64 },
    Gilbert { n: usize, p: f64, seed: u64 },
    Star { n: usize },
    Complete { n: usize },
    Empty { n: usize },
}

impl GeneratorSpec {
    pub fn build(&self) -> dynsis::Result<Graph> {
        match *self {
            GeneratorSpec::Regular { n, k, seed } => gen_regular(n, k, seed),
            GeneratorSpec::WattsStrogatz { n, k, rewire, seed } => {
                gen_watts_strogatz(n, k, rewire, seed)
            }
            GeneratorSpec::BarabasiAlbert { n, m, seed } => gen_barabasi_albert(n, m, seed),
            GeneratorSpec::Gilbert { n, p, seed } => gen_gilbert(n, p, seed),
            GeneratorSpec::Star { n } => Ok(star(n)),
            GeneratorSpec::Complete { n } => Ok(complete(n)),
            GeneratorSpec::Empty { n } => Ok(Graph::empty(n, false)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PolicySpec {
    #[default]
    IidUniform,
    IidWeighted { weights: Vec<f64> },
    Periodic,
    FixedTrace { indices: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpidemicSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_range: Option<BetaRange>,
    pub delta: f64,
}

/// `count` evenly spaced values from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaRange {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl BetaRange {
    pub fn values(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.max } else { self.min + step * i as f64 })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Meanfield,
    #[default]
    Mc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    #[serde(default = "default_horizon")]
    pub horizon: usize,
    #[serde(default = "default_reps")]
    pub reps: usize,
    /// Required: there is no clock-based default.
    pub seed: u64,
    #[serde(default = "default_init_fraction")]
    pub init_fraction: f64,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub allow_reinfection: bool,
}

fn default_horizon() -> usize {
    500
}

fn default_reps() -> usize {
    20
}

fn default_init_fraction() -> f64 {
    0.2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSpec {
    #[serde(default = "default_max_depth")]
    pub max_depth: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<NormKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_products: Option<u128>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_budget_secs: Option<f64>,
}

fn default_max_depth() -> usize {
    4
}

impl Default for AnalysisSpec {
    fn default() -> Self {
        Self { max_depth: default_max_depth(), norm: None, max_products: None, time_budget_secs: None }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// Standard output when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<(Self, PathBuf), CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((Self::from_json(&text)?, base))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        match &self.model {
            ModelSource::Generate { graphs } if graphs.is_empty() => {
                return bad("model.graphs is empty".into())
            }
            ModelSource::EdgeLists { paths } if paths.is_empty() => {
                return bad("model.paths is empty".into())
            }
            ModelSource::DynamicGilbert { .. } if self.policy != PolicySpec::IidUniform => {
                return bad("dynamic_gilbert regenerates every step; omit policy".into())
            }
            _ => {}
        }
        let e = &self.epidemic;
        if e.beta.is_none() && e.beta_range.is_none() {
            return bad("epidemic needs beta or beta_range".into());
        }
        if let Some(r) = e.beta_range {
            if r.min.is_nan() || r.max.is_nan() || r.min >= r.max || r.count < 2 {
                return bad(format!(
                    "beta_range needs min < max and count >= 2, got {}..{} x {}",
                    r.min, r.max, r.count
                ));
            }
        }
        if self.analysis.max_depth == 0 {
            return bad("analysis.max_depth must be at least 1".into());
        }
        if let Some(t) = self.analysis.time_budget_secs {
            if !(t > 0.0 && t.is_finite()) {
                return bad(format!("analysis.time_budget_secs = {t} must be positive"));
            }
        }
        Ok(())
    }

    /// The graph set, in declaration order. Empty for dynamic Gilbert models.
    pub fn graphs(&self, base: &Path) -> Result<Vec<Graph>, CliError> {
        match &self.model {
            ModelSource::Generate { graphs } => {
                graphs.iter().map(|g| g.build().map_err(CliError::from)).collect()
            }
            ModelSource::EdgeLists { paths } => paths
                .iter()
                .map(|p| {
                    let p = base.join(p);
                    let text = fs::read_to_string(&p)
                        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
                    load_edge_list(&text).map_err(|e| {
                        CliError::Config(format!("{}: {e}", p.display()))
                    })
                })
                .collect(),
            ModelSource::DynamicGilbert { .. } => Ok(Vec::new()),
        }
    }

    pub fn policy(&self, graphs: Vec<Graph>) -> Result<SwitchingPolicy, CliError> {
        let policy = match (&self.model, &self.policy) {
            (ModelSource::DynamicGilbert { n, p }, _) => SwitchingPolicy::gilbert_regenerate(*n, *p),
            (_, PolicySpec::IidUniform) => SwitchingPolicy::iid_uniform(graphs),
            (_, PolicySpec::IidWeighted { weights }) => {
                SwitchingPolicy::iid_weighted(graphs, weights.clone())
            }
            (_, PolicySpec::Periodic) => SwitchingPolicy::periodic(graphs),
            (_, PolicySpec::FixedTrace { indices }) => {
                SwitchingPolicy::fixed_trace(graphs, indices.clone())
            }
        };
        policy.map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn single_beta(&self) -> Result<f64, CliError> {
        self.epidemic
            .beta
            .ok_or_else(|| CliError::Config("this command needs epidemic.beta".into()))
    }
}
