//! Monte Carlo estimation, bound verification reports and the command-line
//! front end.

pub mod cli;
pub mod format;
pub mod mc;
pub mod selftest;
pub mod verify;

pub use cli::{run_cli, run_cli_with};
pub use mc::{mc_kn_histogram, mc_tail, mc_tail_with_threads, wilson_interval, worker_count, McEstimate};
pub use verify::{verify_bound, VerifyReport, VerifyRow};
