//! Pipelines, verification suites and JSON run reports behind the
//! `fertaper` binary.

pub mod config;
pub mod pipeline;
pub mod report;
pub mod tools;
pub mod verify;

pub use config::{
    substream, CodeSource, EncodingChoice, Outputs, PipelineConfig, SectorPolicy, Stream,
    TaperOptions, VerificationLevel,
};
pub use pipeline::run_pipeline;
pub use report::{Check, RunReport, SectorEnergy, Sparsity};
pub use verify::{verify, Suite, VerifyConfig};
