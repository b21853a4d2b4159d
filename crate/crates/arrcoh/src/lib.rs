//! File formats, reports and the command line driver for `arrcoh-core`.

pub mod cli;
pub mod io;
pub mod report;

pub use cli::{run, CliError, Command, Format, RunConfig};
