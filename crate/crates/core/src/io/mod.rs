//! Configuration, grid files, metrics and the command-line workflows.

pub mod config;
pub mod gridfile;
pub mod metrics;
pub mod workflow;

pub use config::RunConfig;
pub use gridfile::{read_grid, write_grid, GridFormat};
pub use metrics::{LayerMetrics, MetricsReport};
pub use workflow::{run_diagnose, run_reconstruct, run_roundtrip, run_simulate, FieldFiles, Report};
