//! Experiment harness around `zonal-core`: JSON formats, CSV tables, experiment runners and
//! the pass/fail report used by the `zonal` binary.

pub mod error;
pub mod experiments;
pub mod formats;
pub mod report;
pub mod table;
pub mod thresholds;

pub use error::{Error, Result};
