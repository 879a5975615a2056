//! End-to-end runs: configuration, per-pair processing, metrics and the
//! JSON report.

pub mod config;
pub mod report;
mod run;

pub use config::{ConfigError, PipelineConfig, Targets};
pub use report::{
    render_metrics, to_json, AmplifiedRecord, AttemptRecord, Metrics, PairRecord, RunReport, TargetSimilarity, TaskReport,
    SCHEMA_VERSION,
};
pub use run::{
    compare_against_reference, generation_config, resolve_targets, run_pipeline, run_pipeline_with, target_dir, PipelineError,
    RunOutcome,
};
