//! Experiment driver for the coded matrix multiplication toolkit: config
//! parsing, storage sweeps, regularity studies and executor demos.

pub mod config;
pub mod demo;
pub mod metrics_cmd;
pub mod regularity;
pub mod sweep;
