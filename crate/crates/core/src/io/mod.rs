//! Configuration parsing and CSV formats.

pub mod config;
pub mod report;
pub mod snapshot;
