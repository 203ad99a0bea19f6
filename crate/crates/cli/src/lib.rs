//! Command-line front end for the verification lab.

pub mod commands;
pub mod config;
pub mod report;
pub mod selftest;

pub use config::{Lab, LabConfig};
pub use report::{error_exit_code, Exactness, RunReport};
