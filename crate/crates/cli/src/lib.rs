//! Command-line front end for `ssb-core`: model files, reports and grid
//! field files, plus the subcommand implementations used by the `ssb` binary.

pub mod commands;
pub mod gridio;
pub mod model;
pub mod report;

pub use commands::{CliError, Options};
pub use model::{parse_model_file, ModelError, ModelErrors, ModelFile};
pub use report::{emit_report, parse_report, render_table, Report};
