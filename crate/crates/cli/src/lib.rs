//! File formats, configuration and commands around [`camcov_core`].

pub mod commands;
pub mod config;
pub mod error;
pub mod mesh_io;
pub mod output;
pub mod parallel;
pub mod ply;
pub mod poses;

pub use error::{CliError, Result};
