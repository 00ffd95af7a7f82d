//! Job parsing, dispatch and report rendering for the `pkernel` binary.

pub mod job;
pub mod run;
pub mod text;

pub use job::{parse_job, Format, JobFile, JobSpec};
pub use run::{error_report, exit_code, run_job, Outcome};
