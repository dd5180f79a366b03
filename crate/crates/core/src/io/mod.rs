//! JSON jobs and reports: the front end used by the `maslov` binary.
//!
//! A job is a single JSON document naming a command and its inputs; see
//! `docs/schema.md` for the format.

mod job;
mod report;
mod run;
pub mod verify;

pub use job::{
    parse_job, Command, ComplexRows, Format, JobSpec, LiftDoc, PathDoc, PlaneDoc, RealRows, VerifyDoc,
    DEFAULT_STEPS_PER_PERIOD,
};
pub use report::{IdentityOutcome, IntegerResult, Report, VERSION};
pub use run::{exit_code, run_job};
