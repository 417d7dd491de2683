//! File formats, JSON reports and the `grpvol` command line on top of
//! `grpvol-core`.

pub mod cli;
pub mod error;
pub mod formats;
pub mod report;
pub mod sample;

pub use error::CliError;
