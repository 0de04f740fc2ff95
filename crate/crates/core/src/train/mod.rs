//! KL training of Born machines: adjoint gradients, Adam, single-stage and
//! hierarchical trainers, and block-amplitude encoding.

mod adam;
mod adjoint;
mod bae;
mod stage;

pub use adam::{adam_step, AdamState};
pub(crate) use adjoint::z_mse_and_gradient;
pub use adjoint::{kl_gradient, kl_loss, kl_loss_and_gradient};
pub use bae::{finish_bae, train_bae, train_block, BaeResult, BlockTemplate, TrainedBlock};
pub use stage::{hierarchical_train, hierarchical_train_with, train_flat, train_stage, StageOutcome, TrainResult};

use alloc::vec::Vec;

use crate::dist::KL_EPSILON;
use crate::{Error, Result};

/// Optimizer and loss settings shared by every trainer.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct TrainConfig {
    pub learning_rate: f64,
    /// Adam steps for a single stage.
    pub iterations: usize,
    pub seed: u64,
    pub kl_epsilon: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub adam_epsilon: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.01,
            iterations: 100,
            seed: 0,
            kl_epsilon: KL_EPSILON,
            beta1: 0.9,
            beta2: 0.999,
            adam_epsilon: 1e-8,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::Config("learning rate must be positive"));
        }
        if self.iterations == 0 {
            return Err(Error::Config("iterations must be at least 1"));
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return Err(Error::Config("adam betas must lie in [0, 1)"));
        }
        if !(self.adam_epsilon > 0.0 && self.kl_epsilon > 0.0) {
            return Err(Error::Config("epsilons must be positive"));
        }
        Ok(())
    }
}

/// What happened in one hierarchy stage.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StageReport {
    pub stage: usize,
    pub active_qubits: usize,
    /// Best KL against the pooled target at the stage's own resolution.
    pub kl_stage: f64,
    /// TVD to the full-resolution target with inactive qubits in `|+>`.
    pub tvd_full: f64,
    /// Loss before each Adam step.
    pub trace: Vec<f64>,
    /// Present when the observer keeps time.
    pub wall_time_seconds: Option<f64>,
}

/// Hooks into a training run. The core crate has no clock, so timing is
/// supplied from outside.
pub trait TrainObserver {
    fn stage_started(&mut self, _stage: usize) {}

    fn iteration(&mut self, _stage: usize, _iteration: usize, _loss: f64) {}

    /// Returns the seconds spent in the stage, if known.
    fn stage_finished(&mut self, _stage: usize) -> Option<f64> {
        None
    }
}

impl TrainObserver for () {}
