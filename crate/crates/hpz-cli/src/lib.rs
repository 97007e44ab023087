//! Command-line companion to `hpz-core`: JSON model files, bundled example
//! sets, deterministic CSV/SVG export, and an independent brute-force
//! oracle used for differential testing.

pub mod error;
pub mod export;
pub mod fixtures;
pub mod model;
pub mod oracle;
pub mod random;
