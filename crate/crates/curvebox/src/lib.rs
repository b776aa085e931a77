//! IO companion to `curvebox-core`: value formatting for the CSV/JSON
//! schemas and thread-sharded versions of the counting sweeps.

pub mod fmt;
pub mod parallel;

pub use curvebox_core as core;
