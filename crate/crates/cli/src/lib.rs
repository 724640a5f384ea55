//! Command-line front end for `regulab`.

pub mod app;
pub mod commands;
pub mod output;
pub mod selftest;
pub mod settings;

pub use app::{main_with_args, Cli};
pub use settings::{CliError, RunConfig, Settings};
