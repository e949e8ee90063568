//! Batch front-end library: parameter-grid runs over (p, alpha, n) with
//! deterministic, byte-identical reports.

pub mod grid;
pub mod report;
