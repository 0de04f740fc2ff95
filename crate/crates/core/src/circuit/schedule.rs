use alloc::vec::Vec;

use super::GridLayout;
use crate::{Error, Result};

/// One hierarchy stage: the leftmost `columns` grid columns are active and
/// `layers` new variational layers are appended over them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Stage {
    pub columns: usize,
    pub layers: usize,
    pub iterations: usize,
}

/// Ordered stages, each activating one more grid column than the last.
///
/// The first stage may start wider than one column; a single stage covering
/// the whole grid is the flat ansatz.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HierarchySchedule {
    stages: Vec<Stage>,
}

impl HierarchySchedule {
    pub fn new(layout: &GridLayout, stages: Vec<Stage>) -> Result<Self> {
        let schedule = Self { stages };
        schedule.validate(layout)?;
        Ok(schedule)
    }

    pub fn validate(&self, layout: &GridLayout) -> Result<()> {
        let first = self.stages.first().ok_or(Error::Schedule("no stages"))?;
        if first.columns == 0 {
            return Err(Error::Schedule("empty active set"));
        }
        if self.stages.windows(2).any(|w| w[1].columns != w[0].columns + 1) {
            return Err(Error::Schedule("each stage must add exactly one grid column"));
        }
        if self.stages.last().map(|s| s.columns) != Some(layout.columns()) {
            return Err(Error::Schedule("final stage must cover every column"));
        }
        if self.stages.iter().any(|s| s.iterations == 0) {
            return Err(Error::Schedule("every stage needs at least one iteration"));
        }
        Ok(())
    }

    /// One stage per grid column with explicit layer and iteration counts.
    pub fn hierarchical(layout: &GridLayout, layers: &[usize], iterations: &[usize]) -> Result<Self> {
        let cols = layout.columns();
        if layers.len() != cols || iterations.len() != cols {
            return Err(Error::Length { expected: cols, found: layers.len().min(iterations.len()) });
        }
        let stages =
            (0..cols).map(|c| Stage { columns: c + 1, layers: layers[c], iterations: iterations[c] }).collect();
        Self::new(layout, stages)
    }

    pub fn uniform(layout: &GridLayout, layers: usize, iterations: usize) -> Result<Self> {
        let cols = layout.columns();
        Self::hierarchical(layout, &alloc::vec![layers; cols], &alloc::vec![iterations; cols])
    }

    /// One stage per column with `total_iterations` split in proportion to
    /// each stage's `2^(active qubits)`.
    pub fn proportional(layout: &GridLayout, layers: &[usize], total_iterations: usize) -> Result<Self> {
        let cols = layout.columns();
        let weights: Vec<f64> = (1..=cols).map(|c| (1u64 << layout.qubits_in_columns(c).len()) as f64).collect();
        let sum: f64 = weights.iter().sum();
        let iterations: Vec<usize> =
            weights.iter().map(|w| (libm::round(total_iterations as f64 * w / sum) as usize).max(1)).collect();
        Self::hierarchical(layout, layers, &iterations)
    }

    /// Single stage with every qubit active.
    pub fn flat(layout: &GridLayout, layers: usize, iterations: usize) -> Result<Self> {
        Self::new(layout, alloc::vec![Stage { columns: layout.columns(), layers, iterations }])
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn total_iterations(&self) -> usize {
        self.stages.iter().map(|s| s.iterations).sum()
    }

    /// Parameter slots of the complete circuit.
    pub fn parameter_count(&self, layout: &GridLayout) -> usize {
        self.stages.iter().map(|s| s.layers * layer_parameters(layout, s.columns)).sum()
    }

    /// RZZ gates of the complete circuit.
    pub fn two_qubit_gate_count(&self, layout: &GridLayout) -> usize {
        self.stages.iter().map(|s| s.layers * layout.edges_in_columns(s.columns).len()).sum()
    }
}

/// Slots in one layer over the leftmost `cols` columns: RY and RZ per qubit
/// plus one RZZ per edge.
pub(crate) fn layer_parameters(layout: &GridLayout, cols: usize) -> usize {
    2 * layout.qubits_in_columns(cols).len() + layout.edges_in_columns(cols).len()
}

/// Per-stage layer counts (one stage per column) whose total slot count is
/// as large as possible without exceeding `budget`.
///
/// Every stage gets the same count first; leftover budget then buys extra
/// layers, widest affordable stage first.
pub fn layers_for_budget(layout: &GridLayout, budget: usize) -> Vec<usize> {
    let cols = layout.columns();
    let per_layer: Vec<usize> = (1..=cols).map(|c| layer_parameters(layout, c)).collect();
    let round: usize = per_layer.iter().sum();
    let base = budget / round;
    let mut layers = alloc::vec![base; cols];
    let mut remaining = budget - base * round;
    while let Some(c) = (0..cols).rev().find(|&c| per_layer[c] <= remaining) {
        layers[c] += 1;
        remaining -= per_layer[c];
    }
    layers
}
