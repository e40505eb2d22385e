//! Verification reports, run configuration, the randomized suites and the
//! file-level commands behind the `nct` binary.

mod commands;
mod config;
mod report;
mod suites;

pub use commands::{apply_files, expand_files, norm_file, rellich_file, ExpandKind, ExpandOutput, NormOutput};
pub use config::{RunConfig, Suite, ENV_BOX, ENV_SEED};
pub use report::{Check, Format, Status, Timing, VerificationReport};
pub use suites::run_suite;
