//! Command-line front end for `tfsym-core`: file formats, the verification
//! suites and report emission.

pub mod cli;
pub mod conventions;
pub mod io;
pub mod report;
pub mod suites;

pub use cli::{run, write_reports};
