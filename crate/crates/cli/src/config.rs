//! Experiment configuration: JSON in, validated parameters out.

use irsnet_core::params::{validate, BoundParams, ParamError, SystemParams, ValidatedParams};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentName {
    #[value(name = "fig3_powers")]
    Fig3Powers,
    #[value(name = "fig4_capacity")]
    Fig4Capacity,
    #[value(name = "fig5_outage_lambda")]
    Fig5OutageLambda,
    #[value(name = "fig6_outage_kappa")]
    Fig6OutageKappa,
    #[value(name = "validate_all")]
    ValidateAll,
}

impl ExperimentName {
    pub const ALL: [ExperimentName; 5] = [
        ExperimentName::Fig3Powers,
        ExperimentName::Fig4Capacity,
        ExperimentName::Fig5OutageLambda,
        ExperimentName::Fig6OutageKappa,
        ExperimentName::ValidateAll,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentName::Fig3Powers => "fig3_powers",
            ExperimentName::Fig4Capacity => "fig4_capacity",
            ExperimentName::Fig5OutageLambda => "fig5_outage_lambda",
            ExperimentName::Fig6OutageKappa => "fig6_outage_kappa",
            ExperimentName::ValidateAll => "validate_all",
        }
    }

    /// Whether `grid` holds κ values rather than IRS densities.
    pub fn sweeps_kappa(self) -> bool {
        self == ExperimentName::Fig6OutageKappa
    }

    /// Grid used when a config is built from scratch.
    pub fn default_grid(self) -> Vec<f64> {
        match self {
            ExperimentName::Fig3Powers | ExperimentName::Fig4Capacity | ExperimentName::ValidateAll => vec![1e-4, 3e-4, 1e-3],
            ExperimentName::Fig5OutageLambda => vec![1e-3, 3e-3, 1e-2],
            ExperimentName::Fig6OutageKappa => vec![0.5, 1.0, 2.0, 10.0],
        }
    }
}

impl fmt::Display for ExperimentName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentName {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ExperimentName::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| ConfigError::Spec(format!("unknown experiment {s:?}")))
    }
}

/// The `experiment` block of a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentBlock {
    pub name: ExperimentName,
    /// Sweep values: IRS densities, or κ for `fig6_outage_kappa`.
    #[serde(default)]
    pub grid: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    #[serde(default = "default_threads")]
    pub threads: usize,
    pub out_dir: PathBuf,
    /// Capacity thresholds [nats] for the outage experiments.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_grid: Option<Vec<f64>>,
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub params: SystemParams,
    #[serde(default)]
    pub bound_params: BoundParams,
    pub experiment: ExperimentBlock,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(#[from] ParamError),
    #[error("invalid experiment: {0}")]
    Spec(String),
}

/// Command-line values that replace config fields.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub experiment: Option<ExperimentName>,
}

impl Config {
    /// Desk-scale defaults for `name`: Q = 50, 2000 trials.
    pub fn default_for(name: ExperimentName) -> Config {
        Config {
            params: SystemParams::desk(),
            bound_params: BoundParams::default(),
            experiment: ExperimentBlock {
                name,
                grid: name.default_grid(),
                trials: 2000,
                seed: 1,
                threads: default_threads(),
                out_dir: PathBuf::from("out"),
                alpha_grid: None,
            },
        }
    }

    pub fn from_json(s: &str) -> Result<Config, ConfigError> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: &Path) -> Result<Config, ConfigError> {
        let s = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        Config::from_json(&s)
    }

    /// Canonical pretty-printed form; parsing it back gives the same bytes.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(name) = o.experiment {
            self.experiment.name = name;
        }
        if let Some(s) = o.seed {
            self.experiment.seed = s;
        }
        if let Some(n) = o.trials {
            self.experiment.trials = n;
        }
        if let Some(t) = o.threads {
            self.experiment.threads = t;
        }
        if let Some(d) = &o.out {
            self.experiment.out_dir = d.clone();
        }
    }

    /// Validates parameters, free radii and the experiment block.
    pub fn validate(&self) -> Result<ValidatedParams, ConfigError> {
        let p = validate(self.params.clone())?;
        self.bound_params.validate(&p)?;
        let e = &self.experiment;
        if e.trials == 0 {
            return Err(ConfigError::Spec("trials must be at least 1".into()));
        }
        if e.threads == 0 {
            return Err(ConfigError::Spec("threads must be at least 1".into()));
        }
        if e.name != ExperimentName::ValidateAll && e.grid.is_empty() {
            return Err(ConfigError::Spec(format!("{} needs a nonempty grid", e.name)));
        }
        for &g in &e.grid {
            // every grid value must itself give valid parameters
            let q = if e.name.sweeps_kappa() { p.with_kappa(g) } else { p.with_lambda_irs(g) };
            validate(q)?;
        }
        if let Some(a) = &e.alpha_grid {
            if a.is_empty() || a.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
                return Err(ConfigError::Spec("alpha_grid must be nonempty with finite positive entries".into()));
            }
        }
        Ok(p)
    }

    pub fn alphas(&self) -> Vec<f64> {
        self.experiment.alpha_grid.clone().unwrap_or_else(irsnet_core::montecarlo::default_alpha_grid)
    }
}
