//! File formats, thread-pool drivers, reports and the `ilc` command line
//! on top of `ilc-core`.

pub mod bench;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod oracle;
pub mod pgm;
pub mod tables;
pub mod train;
pub mod yuv;

pub use error::{IlcError, Result};
pub use oracle::ParallelOracle;
