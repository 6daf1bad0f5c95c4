//! Self-supervised SAR feature extraction.

mod error;
pub mod io;

pub use error::{Result, SafeError};
