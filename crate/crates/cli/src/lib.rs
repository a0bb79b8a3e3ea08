//! Library side of the `lamopt` command-line tool: file schemas, the design
//! pipeline and the subcommands, kept out of `main.rs` so they can be tested.

pub mod app;
pub mod commands;
pub mod error;
pub mod json;
pub mod pipeline;
pub mod schema;

pub use error::{CliError, ExitCode};
