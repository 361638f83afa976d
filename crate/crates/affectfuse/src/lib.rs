//! File formats, synthetic data, cached feature extraction, parallel
//! evaluation and report rendering on top of `affectfuse-core`.

pub mod exec;
pub mod extract;
pub mod formats;
pub mod run;
pub mod synth;
pub mod tables;

pub use affectfuse_core as core;
pub use exec::RayonExecutor;
