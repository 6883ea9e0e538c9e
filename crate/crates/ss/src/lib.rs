//! Spectral sequence engine for the evaluation fibration of the free loop
//! space of a complete flag manifold of `SU(n+1)`.

pub mod engine;
pub mod error;
pub mod flag_diff;
pub mod graded;
pub mod record;
pub mod route;
pub mod su4;

pub use error::SsError;
pub use graded::{GradedElement, Shape};
