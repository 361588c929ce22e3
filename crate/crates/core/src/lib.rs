//! Dynamic coupling and execution-frequency metrics from execution traces,
//! unit-test size metrics from source trees, and the rank-correlation
//! analysis relating the two.
//!
//! The stages, in pipeline order:
//!
//! * [`trace`]: trace file parsing, validation and the class scope filter.
//! * [`metrics`]: Import/Export Coupling and Execution Frequency per class.
//! * [`linker`]: source scanning, TLOC/NTC, test-to-production linking.
//! * [`analysis`]: observation table, correlation matrix, boxplots.
//! * [`report`] and [`pipeline`]: output formats and orchestration.

pub mod analysis;
pub mod config;
pub mod error;
pub mod linker;
pub mod metrics;
pub mod pipeline;
pub mod report;
pub mod stats;
pub mod trace;

pub use error::{Error, Result};
