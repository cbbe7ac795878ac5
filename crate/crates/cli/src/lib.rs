//! Documents, the staged pipeline, selftest and acceptance checks behind
//! the `ks` binary.

pub mod acceptance;
pub mod doc;
pub mod pipeline;
pub mod selftest;

pub use pipeline::{run_pipeline, PipelineConfig, PipelineInput, Report, Stage, StageError};
