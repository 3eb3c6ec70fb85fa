//! Command-line front end: scene files, verification suites and reports.

pub mod checks;
pub mod commands;
pub mod report;
