//! Quadtree encoder and decoder.
//!
//! Each CTU is partitioned bottom-up; every leaf tries all 35 modes of the
//! configured predictor family and keeps the one with the fewest bits. Since
//! the codec is lossless the reconstruction equals the input, so the encoder
//! predicts from the original samples under decoder-side availability.

mod decoder;
mod encoder;
mod leaf;
mod order;
mod stats;
mod stream;

use core::fmt;

pub use decoder::decode_plane;
pub use encoder::{
    encode_plane, encode_plane_detailed, Encoded, Encoder, LeafChoice, NodeContent, Partition,
    QuadTreeNode, MODE_BITS,
};
pub use leaf::{leaf_scan, BlockSamples};
pub use order::{BlockRect, CodingOrder, FrameView};
pub use stats::{collect_stats, EncodeStats, UsageSummary};
pub use stream::{Bitstream, StreamHeader, HEADER_BITS, MAGIC};

pub use crate::entropy::Truncated;
use crate::prediction::{IntraMode, NeighborConfig, NeighborError, WeightError, WeightTable};

/// Predictor family, with its on-stream code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PredictorFamily {
    Block,
    Sap,
    ThreeTap,
    BlockRdpcm,
}

impl PredictorFamily {
    pub const ALL: [PredictorFamily; 4] = [
        PredictorFamily::Block,
        PredictorFamily::Sap,
        PredictorFamily::ThreeTap,
        PredictorFamily::BlockRdpcm,
    ];

    pub const fn code(self) -> u8 {
        match self {
            PredictorFamily::Block => 0,
            PredictorFamily::Sap => 1,
            PredictorFamily::ThreeTap => 2,
            PredictorFamily::BlockRdpcm => 3,
        }
    }

    pub const fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(PredictorFamily::Block),
            1 => Some(PredictorFamily::Sap),
            2 => Some(PredictorFamily::ThreeTap),
            3 => Some(PredictorFamily::BlockRdpcm),
            _ => None,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            PredictorFamily::Block => "block",
            PredictorFamily::Sap => "sap",
            PredictorFamily::ThreeTap => "three-tap",
            PredictorFamily::BlockRdpcm => "block+rdpcm",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "block" => Some(PredictorFamily::Block),
            "sap" => Some(PredictorFamily::Sap),
            "three-tap" | "three_tap" | "3tap" => Some(PredictorFamily::ThreeTap),
            "block+rdpcm" | "rdpcm" => Some(PredictorFamily::BlockRdpcm),
            _ => None,
        }
    }
}

impl fmt::Display for PredictorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Smallest and largest supported PU / CTU edge.
pub const MIN_BLOCK: usize = 4;
pub const MAX_BLOCK: usize = 32;

/// Set of allowed PU sizes, one bit per power of two from 4 to 32.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PuSizes(u8);

impl PuSizes {
    pub const ALL: PuSizes = PuSizes(0b1111);

    #[inline]
    fn bit(size: usize) -> Option<u8> {
        if size.is_power_of_two() && (MIN_BLOCK..=MAX_BLOCK).contains(&size) {
            Some(1 << (size.trailing_zeros() - 2))
        } else {
            None
        }
    }

    pub fn from_sizes(sizes: &[usize]) -> Option<Self> {
        let mut mask = 0;
        for &s in sizes {
            mask |= Self::bit(s)?;
        }
        Some(PuSizes(mask))
    }

    #[inline]
    pub fn contains(self, size: usize) -> bool {
        Self::bit(size).is_some_and(|b| self.0 & b != 0)
    }

    /// Any allowed size strictly below `size`.
    #[inline]
    pub fn any_below(self, size: usize) -> bool {
        Self::bit(size).is_some_and(|b| self.0 & (b - 1) != 0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn largest(self) -> Option<usize> {
        (0..4).rev().find(|i| self.0 & (1 << i) != 0).map(|i| MIN_BLOCK << i)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..4).filter(move |i| self.0 & (1 << i) != 0).map(|i| MIN_BLOCK << i)
    }
}

impl Default for PuSizes {
    fn default() -> Self {
        PuSizes::ALL
    }
}

/// Encoder settings. Only `family`, `ctu_size` and, for non-default
/// tables, the 3-tap weights and neighbours reach the bitstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodecConfig {
    pub family: PredictorFamily,
    pub ctu_size: usize,
    /// Leaf sizes the encoder may choose. Blocks crossing the frame edge
    /// are split regardless, down to 4×4.
    pub pu_sizes: PuSizes,
    pub weights: WeightTable,
    pub neighbors: NeighborConfig,
    /// Restricts every leaf to a single mode.
    pub forced_mode: Option<IntraMode>,
}

impl CodecConfig {
    pub fn new(family: PredictorFamily) -> Self {
        CodecConfig {
            family,
            ctu_size: 32,
            pu_sizes: PuSizes::ALL,
            weights: WeightTable::shipped(),
            neighbors: NeighborConfig::shipped(),
            forced_mode: None,
        }
    }

    pub fn with_weights(mut self, weights: WeightTable) -> Self {
        self.weights = weights;
        self
    }

    pub fn with_neighbors(mut self, neighbors: NeighborConfig) -> Self {
        self.neighbors = neighbors;
        self
    }

    pub fn with_forced_mode(mut self, mode: Option<IntraMode>) -> Self {
        self.forced_mode = mode;
        self
    }

    pub fn with_ctu_size(mut self, ctu_size: usize) -> Self {
        self.ctu_size = ctu_size;
        self
    }

    pub fn with_pu_sizes(mut self, pu_sizes: PuSizes) -> Self {
        self.pu_sizes = pu_sizes;
        self
    }

    pub fn validate(&self) -> Result<(), CodecError> {
        if !self.ctu_size.is_power_of_two() || !(MIN_BLOCK..=MAX_BLOCK).contains(&self.ctu_size) {
            return Err(CodecError::InvalidConfig("ctu size must be 4, 8, 16 or 32"));
        }
        if self.pu_sizes.is_empty() || self.pu_sizes.largest().is_some_and(|s| s > self.ctu_size) {
            return Err(CodecError::InvalidConfig("pu sizes must be a non-empty subset of 4..=ctu size"));
        }
        self.neighbors.validate().map_err(CodecError::Neighbors)?;
        Ok(())
    }

    /// The 3-tap tables differ from the compiled-in ones and must travel
    /// with the stream.
    pub fn has_custom_tables(&self) -> bool {
        self.family == PredictorFamily::ThreeTap
            && (self.weights != WeightTable::shipped() || self.neighbors != NeighborConfig::shipped())
    }
}

impl Default for CodecConfig {
    fn default() -> Self {
        CodecConfig::new(PredictorFamily::ThreeTap)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodecError {
    InvalidConfig(&'static str),
    /// Plane dimensions do not fit the 16-bit header fields.
    TooLarge { width: usize, height: usize },
    BadMagic,
    UnsupportedVersion(u8),
    UnsupportedFamily(u8),
    InvalidHeader(&'static str),
    Truncated,
    Corrupt(&'static str),
    Weights(WeightError),
    Neighbors(NeighborError),
}

impl fmt::Display for CodecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodecError::InvalidConfig(msg) => write!(f, "invalid codec configuration: {msg}"),
            CodecError::TooLarge { width, height } => {
                write!(f, "plane {width}x{height} exceeds the 65535 pixel header limit")
            }
            CodecError::BadMagic => f.write_str("not an ILC1 bitstream (bad magic)"),
            CodecError::UnsupportedVersion(v) => write!(f, "unsupported bitstream version {v}"),
            CodecError::UnsupportedFamily(c) => write!(f, "unsupported predictor family code {c}"),
            CodecError::InvalidHeader(msg) => write!(f, "invalid header: {msg}"),
            CodecError::Truncated => f.write_str("truncated bitstream"),
            CodecError::Corrupt(msg) => write!(f, "corrupt bitstream: {msg}"),
            CodecError::Weights(e) => write!(f, "embedded weight table: {e}"),
            CodecError::Neighbors(e) => write!(f, "neighbour configuration: {e}"),
        }
    }
}

impl core::error::Error for CodecError {}

impl From<Truncated> for CodecError {
    fn from(_: Truncated) -> Self {
        CodecError::Truncated
    }
}
