//! Command-line front end for `stirap-core`: experiment configuration,
//! figure runners and machine-readable CSV/JSON outputs.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
