//! Batch front end for `ggp-core`: JSON job files, the three pairing
//! routes, multiplicities and the oracle suite.
//!
//! A job names a command (`pair`, `factorize`, `multiplicity` or
//! `oracle`) together with its inputs; [`run::run_job`] returns a JSON
//! report and an exit status (0 on agreement, 1 on invalid input, 2 when
//! two computations that must agree do not).

pub mod error;
pub mod json;
pub mod oracle;
pub mod run;

pub use error::{CliError, ExitStatus};
pub use json::JobSpec;
pub use run::{run_job, Outcome, RunConfig};
