//! Problem and circuit files, run configuration and the command drivers.

mod commands;
mod config;
mod problem;

pub use commands::*;
pub use config::*;
pub use problem::*;
