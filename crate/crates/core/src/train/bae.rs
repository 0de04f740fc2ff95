//! Block-amplitude encoding: one independent register per image tile.

use alloc::vec::Vec;

use super::stage::{hierarchical_train, TrainResult};
use super::{StageReport, TrainConfig};
use crate::circuit::{GridLayout, HierarchySchedule, ParameterizedCircuit};
use crate::dist::ProbabilityVector;
use crate::imgio::{assemble_blocks, partition_blocks, BlockDecomposition, BlockGeometry, GrayImage};
use crate::rng::derive_seed;
use crate::{Error, Result};

/// Hierarchical schedule shared by every block: `layers` per stage and
/// `iterations` per stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BlockTemplate {
    pub layers: usize,
    pub iterations: usize,
}

impl BlockTemplate {
    pub fn schedule(&self, layout: &GridLayout) -> Result<HierarchySchedule> {
        HierarchySchedule::uniform(layout, self.layers, self.iterations)
    }
}

/// One trained tile.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrainedBlock {
    pub index: usize,
    /// Top-left pixel of the tile.
    pub origin: (usize, usize),
    /// Total intensity of the tile.
    pub norm: f64,
    pub circuit: ParameterizedCircuit,
    pub params: Vec<f64>,
    pub reports: Vec<StageReport>,
    /// A tile with no intensity is not trained; its circuit is left empty
    /// of parameters.
    pub blank: bool,
}

impl TrainedBlock {
    pub fn distribution(&self) -> Result<ProbabilityVector> {
        Ok(self.circuit.run(&self.params)?.born_distribution())
    }
}

/// Trains tile `index` of `decomposition`. The block seed is derived from
/// `config.seed` and the index alone, so blocks can run in any order.
pub fn train_block(
    decomposition: &BlockDecomposition,
    index: usize,
    template: &BlockTemplate,
    config: &TrainConfig,
) -> Result<TrainedBlock> {
    let geometry = &decomposition.geometry;
    let tile = decomposition.tiles.get(index).ok_or(Error::MissingBlock(index))?;
    let norm = decomposition.norms[index];
    let layout = GridLayout::for_image(tile.height(), tile.width())?;
    let schedule = template.schedule(&layout)?;
    let origin = geometry.origin(index);
    if norm <= 0.0 {
        return Ok(TrainedBlock {
            index,
            origin,
            norm,
            circuit: ParameterizedCircuit::empty(layout.num_qubits()),
            params: Vec::new(),
            reports: Vec::new(),
            blank: true,
        });
    }
    let block_config = TrainConfig { seed: derive_seed(config.seed, index as u64), ..*config };
    let TrainResult { reports, circuit, params } = hierarchical_train(tile, &layout, &schedule, &block_config)?;
    Ok(TrainedBlock { index, origin, norm, circuit, params, reports, blank: false })
}

/// Assembled outcome of a block-amplitude run.
#[derive(Debug, Clone, PartialEq)]
pub struct BaeResult {
    pub geometry: BlockGeometry,
    pub blocks: Vec<TrainedBlock>,
    pub assembled: GrayImage,
    /// TVD between the original image and the union of the block models,
    /// each weighted by its tile norm.
    pub tvd: f64,
}

impl BaeResult {
    pub fn qubits_per_block(&self) -> usize {
        self.blocks.first().map_or(0, |b| b.circuit.num_qubits())
    }

    pub fn total_qubits(&self) -> usize {
        self.qubits_per_block() * self.blocks.len()
    }

    pub fn total_params(&self) -> usize {
        self.blocks.iter().map(|b| b.circuit.num_params()).sum()
    }
}

/// Combines per-block results (in any order) against the original image.
pub fn finish_bae(image: &GrayImage, geometry: BlockGeometry, mut blocks: Vec<TrainedBlock>) -> Result<BaeResult> {
    blocks.sort_by_key(|b| b.index);
    let count = geometry.num_blocks();
    if let Some(missing) = (0..count).find(|&i| blocks.get(i).map(|b| b.index) != Some(i)) {
        return Err(Error::MissingBlock(missing));
    }
    let total = image.total_intensity();
    if total <= 0.0 {
        return Err(Error::InvalidMass);
    }
    let dists: Vec<ProbabilityVector> = blocks
        .iter()
        .map(|b| if b.blank { Ok(ProbabilityVector::uniform(b.circuit.num_qubits())) } else { b.distribution() })
        .collect::<Result<_>>()?;
    let norms: Vec<f64> = blocks.iter().map(|b| b.norm).collect();
    let assembled = assemble_blocks(&geometry, &dists, &norms)?;

    // Unclamped model mass q(x) = norm_i / total * q_i(local x).
    let mut diff = 0.0;
    for (block, dist) in blocks.iter().zip(&dists) {
        let weight = if block.blank { 0.0 } else { block.norm / total };
        let (r0, c0) = block.origin;
        for r in 0..geometry.tile_height {
            for c in 0..geometry.tile_width {
                let model = weight * dist.mass()[r * geometry.tile_width + c];
                diff += (image.get(r0 + r, c0 + c) / total - model).abs();
            }
        }
    }
    Ok(BaeResult { geometry, blocks, assembled, tvd: (0.5 * diff).clamp(0.0, 1.0) })
}

/// Partitions `image` into `2b^2` tiles, trains each serially and assembles.
pub fn train_bae(image: &GrayImage, b: usize, template: &BlockTemplate, config: &TrainConfig) -> Result<BaeResult> {
    config.validate()?;
    let decomposition = partition_blocks(image, b)?;
    decomposition.geometry.qubits_per_block()?;
    let blocks = (0..decomposition.geometry.num_blocks())
        .map(|i| train_block(&decomposition, i, template, config))
        .collect::<Result<Vec<_>>>()?;
    finish_bae(image, decomposition.geometry, blocks)
}
