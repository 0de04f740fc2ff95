//! Block-amplitude training across threads.
//!
//! Blocks share nothing and each derives its seed from its index, so the
//! result does not depend on the thread count or on scheduling order.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use qcbm_core::imgio::{partition_blocks, BlockDecomposition, GrayImage};
use qcbm_core::train::{finish_bae, train_block, BaeResult, BlockTemplate, TrainConfig, TrainedBlock};

use crate::{Error, Result};

/// Trains every block of `decomposition` on up to `threads` workers.
/// Results come back in block order; a failing block does not stop the rest.
pub fn train_blocks(
    decomposition: &BlockDecomposition,
    template: &BlockTemplate,
    config: &TrainConfig,
    threads: usize,
) -> Vec<qcbm_core::Result<TrainedBlock>> {
    let count = decomposition.geometry.num_blocks();
    let next = AtomicUsize::new(0);
    let results = Mutex::new((0..count).map(|_| None).collect::<Vec<_>>());
    thread::scope(|scope| {
        for _ in 0..threads.clamp(1, count.max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= count {
                    break;
                }
                let result = train_block(decomposition, i, template, config);
                results.lock().expect("no worker panics while holding the lock")[i] = Some(result);
            });
        }
    });
    results
        .into_inner()
        .expect("workers finished")
        .into_iter()
        .map(|r| r.expect("every block index was claimed"))
        .collect()
}

/// Parallel form of [`qcbm_core::train::train_bae`].
pub fn train_bae_parallel(
    image: &GrayImage,
    b: usize,
    template: &BlockTemplate,
    config: &TrainConfig,
    threads: usize,
) -> Result<BaeResult> {
    config.validate()?;
    let decomposition = partition_blocks(image, b)?;
    decomposition.geometry.qubits_per_block()?;
    let mut blocks = Vec::new();
    for (index, result) in train_blocks(&decomposition, template, config, threads).into_iter().enumerate() {
        blocks.push(result.map_err(|source| Error::Block { index, source })?);
    }
    Ok(finish_bae(image, decomposition.geometry, blocks)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcbm_core::rng::{seeded, uniform};
    use qcbm_core::train::train_bae;

    #[test]
    fn matches_serial() {
        let mut rng = seeded(1);
        let image = GrayImage::from_fn(8, 16, |_, _| uniform(&mut rng)).unwrap();
        let template = BlockTemplate { layers: 1, iterations: 8 };
        let config = TrainConfig { seed: 3, ..TrainConfig::default() };
        let serial = train_bae(&image, 2, &template, &config).unwrap();
        for threads in [1, 3, 8] {
            assert_eq!(train_bae_parallel(&image, 2, &template, &config, threads).unwrap(), serial);
        }
    }
}
