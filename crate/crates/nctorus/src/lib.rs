//! File formats, experiment runners and report rendering on top of
//! [`nctorus_core`].

pub mod config;
pub mod experiments;
pub mod io;
pub mod output;

pub use config::{ExperimentConfig, OutputFormat};
