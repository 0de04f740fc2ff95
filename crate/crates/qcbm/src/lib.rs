//! Files, parallelism and the command line for [`qcbm_core`].
//!
//! * [`pgm`]: binary and ASCII PGM images.
//! * [`export`]: OpenQASM 2 and structured JSON circuit text.
//! * [`checkpoint`]: trained circuits with the metadata needed to reuse them.
//! * [`config`]: the run configuration file.
//! * [`report`]: CSV tables and SVG bar charts.
//! * [`parallel`]: multi-threaded block-amplitude training.
//! * [`cli`]: the `qcbm` binary.

pub mod checkpoint;
pub mod cli;
pub mod config;
mod error;
pub mod export;
pub mod parallel;
pub mod pgm;
pub mod report;
pub mod timing;

pub use error::{Error, Result};
pub use qcbm_core as core;
