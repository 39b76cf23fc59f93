//! Spatial predictors: block-based, sample-based angular (SAP) and 3-tap.

mod block;
mod mode;
mod neighbors;
mod pixel;
mod rdpcm;
mod reference;
mod weights;

pub use block::{
    interpolate, predict_block, predict_block_angular, predict_block_dc, predict_block_planar,
};
pub use mode::{IntraMode, ModeGroup, ANGLE_DISPLACEMENT};
pub use neighbors::{ModeNeighbors, NeighborConfig, NeighborError, Offset, ScanOrder};
pub use pixel::{apply_3tap, gather_3tap, predict_pixel_3tap, predict_pixel_sap, sap_scan};
pub use rdpcm::{rdpcm_forward, rdpcm_inverse, RdpcmDirection};
pub use reference::{build_reference_array, CausalSamples, InBounds, ReferenceArray};
pub use weights::{
    size_class, ModePooling, SlotLayout, WeightError, WeightTable, SHIPPED_TRIPLES, SIZE_CLASSES,
};
