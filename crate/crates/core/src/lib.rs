//! Exact arithmetic and verification kernels for Diophantine approximation
//! on affine hyperplanes over F_q((T⁻¹)).

pub mod constants;
pub mod dioph;
pub mod error;
pub mod exterior;
pub mod field;
pub mod good;
pub mod haar;
pub mod nondiv;
pub mod real;

pub use error::{LabError, Result};
