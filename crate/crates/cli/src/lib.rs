//! The `posfo` command-line tool and its HTTP game service.

pub mod commands;
pub mod format;
pub mod serve;
pub mod session;

pub use commands::{run, Cli, Report};
