//! Verification suite, reports, golden files and configuration behind the
//! `multiloop` command.

pub mod config;
pub mod golden;
pub mod report;
pub mod suite;

pub use report::{emit_report, CheckReport, Format, Status};
pub use suite::{run_suite, Check, SuiteConfig, SuiteError};
