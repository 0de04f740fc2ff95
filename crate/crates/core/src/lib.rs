//! Training engine for quantum circuit Born machines that load grayscale
//! images into simulated quantum states.
//!
//! The crate is `no_std` and only needs an allocator. File formats, the CLI
//! and parallel block training live in the `qcbm` companion crate.
//!
//! Module map:
//!
//! * [`qstate`]: dense statevector simulation and Born-rule readout.
//! * [`dist`]: probability vectors, resolution changes and distances.
//! * [`circuit`]: circuit IR, the grid-structured hierarchical ansatz,
//!   basis compilation and OpenQASM text export.
//! * [`imgio`]: grayscale images, pixel/bitstring mapping and block
//!   partitioning.
//! * [`train`]: KL loss, adjoint gradients, Adam and the staged trainers.
//! * [`analysis`]: shot sampling and coarse-grained marginal statistics.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod circuit;
pub mod dist;
mod error;
pub mod imgio;
pub mod qstate;
pub mod rng;
pub mod train;

pub use error::{Error, Result};

pub(crate) fn exact_log2(value: usize) -> Option<usize> {
    if value.is_power_of_two() {
        Some(value.trailing_zeros() as usize)
    } else {
        None
    }
}
