//! File formats, parallel drivers and the command-line surface for
//! [`lensurg_core`].

pub mod cli;
pub mod graph_json;
pub mod parallel;
pub mod record;

pub use lensurg_core as core;
