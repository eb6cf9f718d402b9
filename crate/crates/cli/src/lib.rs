//! Configuration, run manifests and subcommands of the `irsfactory` binary.

pub mod commands;
pub mod config;
pub mod manifest;

pub use commands::{cmd_compare, cmd_deploy, cmd_simulate, cmd_sweep, Axis, AxisValues};
pub use config::FileConfig;
pub use manifest::{manifest_id, verify_outputs, RunManifest};
