//! Library side of the `holoconf` command-line tool.

pub mod commands;
pub mod verify;

pub use verify::{run_verify, Bound, CheckRecord, Suite, UnverifiedClaim, VerificationSummary, VerifyOptions};
