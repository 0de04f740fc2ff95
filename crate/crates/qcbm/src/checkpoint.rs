//! Trained circuit checkpoints.

use std::fs;
use std::path::Path;

use qcbm_core::circuit::{GridLayout, HierarchySchedule, ParameterizedCircuit};
use qcbm_core::dist::ProbabilityVector;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const CHECKPOINT_VERSION: u32 = 1;

/// Source image geometry. The circuit encodes the zero-padded image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImageMeta {
    pub height: usize,
    pub width: usize,
    pub padded_height: usize,
    pub padded_width: usize,
    /// Total intensity, which rescales the distribution back to pixels.
    pub norm_constant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub image: ImageMeta,
    pub layout: GridLayout,
    pub schedule: HierarchySchedule,
    pub seed: u64,
    pub flat: bool,
    pub circuit: ParameterizedCircuit,
    pub params: Vec<f64>,
}

impl Checkpoint {
    pub fn validate(&self) -> Result<()> {
        if self.version != CHECKPOINT_VERSION {
            return Err(Error::Format(format!("checkpoint version {}", self.version)));
        }
        self.circuit.validate()?;
        self.schedule.validate(&self.layout)?;
        if self.circuit.num_qubits() != self.layout.num_qubits() {
            return Err(qcbm_core::Error::Length {
                expected: self.layout.num_qubits(),
                found: self.circuit.num_qubits(),
            }
            .into());
        }
        if self.params.len() != self.circuit.num_params() {
            return Err(qcbm_core::Error::ParameterCount {
                expected: self.circuit.num_params(),
                found: self.params.len(),
            }
            .into());
        }
        Ok(())
    }

    pub fn distribution(&self) -> Result<ProbabilityVector> {
        Ok(self.circuit.run(&self.params)?.born_distribution())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let checkpoint: Checkpoint = serde_json::from_str(text)?;
        checkpoint.validate()?;
        Ok(checkpoint)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()?).map_err(Error::io(path))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::from_json(&fs::read_to_string(path).map_err(Error::io(path))?)
    }
}
