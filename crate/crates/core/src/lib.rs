//! Active object recognition with joint label and action learning.

pub mod agent;
pub mod belief;
pub mod env;
mod error;
pub mod eval;
pub mod net;

pub use error::{Error, Result};
