//! Harness library behind the `latspec` binary: configuration, corpus
//! generation, verification suites, and report assembly.

pub mod config;
pub mod report;
pub mod spec_io;
pub mod suites;

pub use config::{Suite, VerificationConfig};
pub use report::{ReportEntry, VerificationReport};
pub use spec_io::MeasureSpec;
pub use suites::{build_corpus, run_suites};
