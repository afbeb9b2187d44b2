//! Companion crate to `mfjump-core`: configuration files, CSV/SVG
//! emission, and the command implementations behind the `mfjump` binary.

pub mod commands;
pub mod config;
pub mod emit;
pub mod svg;

pub use commands::CmdError;
pub use config::{ConfigError, ExperimentConfig};
