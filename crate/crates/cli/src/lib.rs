//! Front end for the free loop space engine: polynomial commands, the
//! spectral sequence run and its verification, and the acceptance checks.

pub mod acceptance;
pub mod commands;
pub mod error;
pub mod input;

pub use error::CliError;
