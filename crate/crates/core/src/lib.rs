//! Modeling and validation toolkit for single sub-channel (32-bit) DDR5
//! memory modules.
//!
//! - [`spd`]: SPD byte 235 bus-width descriptor codec and module classes.
//! - [`config`]: transaction width, peak/effective bandwidth, capacity.
//! - [`roofline`]: roofline classification, deficits, inversion, iGPU margin.
//! - [`platform`]: POST/training outcomes for slot populations per controller.
//! - [`queue`]: discrete-event command-queue simulation plus M/D/1 oracle.
//! - [`bom`]: bill-of-materials decomposition and die-count scaling.
//! - [`report`]: the reference tables rendered from embedded defaults.

pub mod bom;
pub mod config;
pub mod interval;
pub mod platform;
pub mod queue;
pub mod report;
pub mod roofline;
pub mod spd;
pub mod table;

pub use interval::Interval;
