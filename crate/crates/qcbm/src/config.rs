//! Run configuration, read from TOML and overridden by command-line flags.

use std::path::{Path, PathBuf};

use qcbm_core::circuit::{layers_for_budget, GridLayout, HierarchySchedule};
use qcbm_core::train::{BlockTemplate, TrainConfig};
use serde::{Deserialize, Serialize};

/// Documentation of every key, shown by `--help`.
pub const CONFIG_KEYS: &str = "\
Config file keys (TOML) and defaults:
  input = <path>                   image to load (PGM), no default
  output = \"qcbm-out\"              directory for all artifacts
  seed = 0                         seed for initial parameters and blocks
  [layout]                         optional; must match the padded image
  vertical = <j>                   row qubits (log2 of padded height)
  horizontal = <k>                 column qubits (log2 of padded width)
  [schedule]
  layers = [1]                     layers per stage; one value applies to all stages
  iterations = <list>              Adam steps per stage; unset splits total_iterations
  total_iterations = 1000          split across stages in proportion to 2^(active qubits)
  budget = <n>                     parameter budget used when layers is unset
  flat_layers = <n>                layers for --flat; unset matches the hierarchical parameter count
  [optimizer]
  learning_rate = 0.01
  beta1 = 0.9
  beta2 = 0.999
  adam_epsilon = 1e-8
  kl_epsilon = 1e-12               clamp on model probabilities inside the KL loss
  [bae]
  b = 2                            block parameter; the image splits into 2*b^2 tiles, 0 keeps one block
  layers = 1                       layers per stage in every block
  iterations = 100                 Adam steps per stage in every block
  parallel = 1                     worker threads for block training";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub output: PathBuf,
    pub seed: u64,
    pub layout: Option<LayoutSpec>,
    pub schedule: ScheduleSpec,
    pub optimizer: OptimizerSpec,
    pub bae: BaeSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            input: None,
            output: PathBuf::from("qcbm-out"),
            seed: 0,
            layout: None,
            schedule: ScheduleSpec::default(),
            optimizer: OptimizerSpec::default(),
            bae: BaeSpec::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutSpec {
    pub vertical: usize,
    pub horizontal: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScheduleSpec {
    pub layers: Option<Vec<usize>>,
    pub iterations: Option<Vec<usize>>,
    pub total_iterations: usize,
    pub budget: Option<usize>,
    pub flat_layers: Option<usize>,
}

impl Default for ScheduleSpec {
    fn default() -> Self {
        Self { layers: None, iterations: None, total_iterations: 1000, budget: None, flat_layers: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerSpec {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub adam_epsilon: f64,
    pub kl_epsilon: f64,
}

impl Default for OptimizerSpec {
    fn default() -> Self {
        let t = TrainConfig::default();
        Self {
            learning_rate: t.learning_rate,
            beta1: t.beta1,
            beta2: t.beta2,
            adam_epsilon: t.adam_epsilon,
            kl_epsilon: t.kl_epsilon,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BaeSpec {
    pub b: usize,
    pub layers: usize,
    pub iterations: usize,
    pub parallel: usize,
}

impl Default for BaeSpec {
    fn default() -> Self {
        Self { b: 2, layers: 1, iterations: 100, parallel: 1 }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: toml::de::Error },
    #[error("{0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

fn per_stage(values: &[usize], stages: usize, what: &str) -> Result<Vec<usize>, ConfigError> {
    match values.len() {
        1 => Ok(vec![values[0]; stages]),
        n if n == stages => Ok(values.to_vec()),
        n => Err(invalid(format!("{what} lists {n} values for {stages} stages"))),
    }
}

impl RunConfig {
    pub fn from_toml(text: &str, path: &Path) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|source| ConfigError::Parse { path: path.to_path_buf(), source })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text =
            std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_path_buf(), source })?;
        Self::from_toml(&text, path)
    }

    pub fn train_config(&self) -> TrainConfig {
        let o = &self.optimizer;
        TrainConfig {
            learning_rate: o.learning_rate,
            iterations: 1,
            seed: self.seed,
            kl_epsilon: o.kl_epsilon,
            beta1: o.beta1,
            beta2: o.beta2,
            adam_epsilon: o.adam_epsilon,
        }
    }

    pub fn block_template(&self) -> BlockTemplate {
        BlockTemplate { layers: self.bae.layers, iterations: self.bae.iterations }
    }

    /// Checks everything that does not depend on the image.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.input.is_none() {
            return Err(invalid("no input image given"));
        }
        self.train_config().validate().map_err(|e| invalid(e.to_string()))?;
        let s = &self.schedule;
        if s.total_iterations == 0 {
            return Err(invalid("schedule.total_iterations must be at least 1"));
        }
        if s.layers.as_ref().is_some_and(|l| l.is_empty()) || s.iterations.as_ref().is_some_and(|i| i.is_empty()) {
            return Err(invalid("schedule lists must not be empty"));
        }
        if s.iterations.as_ref().is_some_and(|i| i.contains(&0)) {
            return Err(invalid("every stage needs at least one iteration"));
        }
        if self.bae.iterations == 0 || self.bae.parallel == 0 {
            return Err(invalid("bae.iterations and bae.parallel must be at least 1"));
        }
        Ok(())
    }

    /// Checks an optional explicit layout against the one implied by the image.
    pub fn check_layout(&self, layout: &GridLayout) -> Result<(), ConfigError> {
        match self.layout {
            Some(l) if (l.vertical, l.horizontal) != (layout.vertical(), layout.horizontal()) => Err(invalid(format!(
                "layout {}+{} does not match the image, which needs {}+{}",
                l.vertical,
                l.horizontal,
                layout.vertical(),
                layout.horizontal()
            ))),
            _ => Ok(()),
        }
    }

    pub fn hierarchical_schedule(&self, layout: &GridLayout) -> Result<HierarchySchedule, ConfigError> {
        let stages = layout.columns();
        let s = &self.schedule;
        let layers = match (&s.layers, s.budget) {
            (Some(l), _) => per_stage(l, stages, "schedule.layers")?,
            (None, Some(budget)) => layers_for_budget(layout, budget),
            (None, None) => vec![1; stages],
        };
        let schedule = match &s.iterations {
            Some(i) => HierarchySchedule::hierarchical(layout, &layers, &per_stage(i, stages, "schedule.iterations")?),
            None => HierarchySchedule::proportional(layout, &layers, s.total_iterations),
        };
        schedule.map_err(|e| invalid(e.to_string()))
    }

    /// Single-stage schedule with the same iteration total and, unless
    /// `flat_layers` is set, the layer count closest to the same number of
    /// parameters.
    pub fn flat_schedule(&self, layout: &GridLayout) -> Result<HierarchySchedule, ConfigError> {
        let hierarchical = self.hierarchical_schedule(layout)?;
        let per_layer =
            HierarchySchedule::flat(layout, 1, 1).map_err(|e| invalid(e.to_string()))?.parameter_count(layout);
        let layers = self.schedule.flat_layers.unwrap_or_else(|| {
            let target = hierarchical.parameter_count(layout) as f64;
            ((target / per_layer as f64).round() as usize).max(1)
        });
        HierarchySchedule::flat(layout, layers, hierarchical.total_iterations()).map_err(|e| invalid(e.to_string()))
    }
}
