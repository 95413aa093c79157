//! Command-line front end and Monte Carlo benchmark harness.

pub mod commands;
pub mod config;
pub mod harness;
pub mod io;
pub mod registry;
pub mod svg;
pub mod timing;
