//! Command-line front end for the `ttc-core` laboratory: figure presets,
//! config files, and CSV / JSON output.

pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod run;

pub use config::{parse_args, resolve, Cli, Experiment, ParseOutcome, RunConfig};
pub use error::{CliError, CliResult};
pub use run::{run_experiment, RunOutcome};
