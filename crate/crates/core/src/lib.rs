//! Exact segment arrangements and a laboratory for measuring face
//! complexities in overlays of arrangements.

pub mod arrangement;
pub mod bench;
pub mod boundary;
pub mod ds;
pub mod error;
pub mod exact;
pub mod exec;
pub mod generators;
pub mod motion;
pub mod overlay;

pub use error::{Error, Result};
