//! Lossless intra coding of single-plane images.
//!
//! Three spatial predictor families share one quadtree encoder and one
//! context-adaptive Rice coder:
//!
//! * block-based prediction (planar, DC and 33 angular modes interpolated at
//!   1/32 sample accuracy from the block's reference samples),
//! * sample-based angular prediction, which applies the same angular
//!   interpolation per pixel against the immediately adjacent row or column,
//! * 3-tap prediction, where every pixel is a fixed-point weighted sum of three
//!   mode-dependent causal neighbours.
//!
//! The [`training`] module contains the offline procedure producing 3-tap
//! weight tables: iterated least squares per mode followed by a bitrate-driven
//! coordinate descent over ±1 weight transfers.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! parallel drivers live in the `ilc` crate.

#![no_std]

extern crate alloc;

pub mod codec;
pub mod entropy;
pub mod plane;
pub mod prediction;
pub mod training;

pub use codec::{
    decode_plane, encode_plane, CodecConfig, CodecError, EncodeStats, PredictorFamily,
    QuadTreeNode,
};
pub use plane::{Corpus, Plane, PlaneError};
pub use prediction::{IntraMode, NeighborConfig, WeightTable};
