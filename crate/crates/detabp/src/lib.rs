//! File formats, instance families, benchmarks and the command-line front
//! end for `detabp-core`.

pub mod bench;
pub mod cli;
pub mod family;
pub mod json;

pub use detabp_core as core;
