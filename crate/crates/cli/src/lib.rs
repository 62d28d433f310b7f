//! Experiment runner for the irsnet simulator.
//!
//! A JSON [`Config`] names one experiment; [`run`] executes it and writes a
//! CSV table plus an SVG plot. `validate_all` runs the property suite in
//! [`validation`] instead.

pub mod config;
pub mod experiments;
pub mod output;
pub mod svg;
pub mod validation;

pub use config::{Config, ConfigError, ExperimentName, Overrides};
pub use experiments::{run, Artifacts, RunError};
