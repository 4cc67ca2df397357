//! Command-line side of the FPU traveling-wave solver: the parameter
//! catalog, solution and configuration files, a threaded executor, the
//! per-row pipeline and report formatting.

pub mod catalog;
pub mod pipeline;
pub mod report;
pub mod solution;
pub mod threads;

pub use catalog::{catalog, entry, parse_guess, CatalogEntry, CatalogError};
pub use pipeline::{certify_halving, run_row, solve, Certified, RowOutcome, Solved};
pub use solution::{read_config, read_solution, write_solution, FormatError, RunConfig, Solution};
pub use threads::Threads;
