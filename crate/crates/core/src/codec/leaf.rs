//! Prediction of one leaf, shared by encoder, decoder and training.

use alloc::vec::Vec;

use super::order::BlockRect;
use super::{CodecConfig, PredictorFamily};
use crate::prediction::{
    build_reference_array, gather_3tap, predict_block, predict_pixel_3tap, predict_pixel_sap,
    sap_scan, CausalSamples, IntraMode, NeighborConfig, RdpcmDirection, ReferenceArray, ScanOrder,
};

/// Neighbourhood seen by the pixel predictors inside one block.
///
/// Samples inside the block come from the reconstruction. The row above and
/// the column left of the block come from the block's reference array, so
/// unavailable positions there are substituted exactly as for block-based
/// prediction. Anything further out falls back to plain availability.
pub struct BlockSamples<'a, S: ?Sized> {
    inner: &'a S,
    refs: &'a ReferenceArray,
    block: BlockRect,
}

impl<'a, S: CausalSamples + ?Sized> BlockSamples<'a, S> {
    pub fn new(inner: &'a S, refs: &'a ReferenceArray, block: BlockRect) -> Self {
        debug_assert_eq!(refs.size(), block.size);
        BlockSamples { inner, refs, block }
    }
}

impl<S: CausalSamples + ?Sized> CausalSamples for BlockSamples<'_, S> {
    #[inline]
    fn bit_depth(&self) -> u8 {
        self.inner.bit_depth()
    }

    #[inline]
    fn sample(&self, x: isize, y: isize) -> Option<u16> {
        let bx = self.block.x as isize;
        let by = self.block.y as isize;
        let n2 = 2 * self.block.size as isize;
        if y == by - 1 && (bx - 1..bx + n2).contains(&x) {
            return Some(self.refs.above()[(x - bx + 1) as usize]);
        }
        if x == bx - 1 && (by..by + n2).contains(&y) {
            return Some(self.refs.left()[(y - by) as usize]);
        }
        self.inner.sample(x, y)
    }
}

/// How a leaf's samples are predicted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum LeafKind {
    Block,
    Sap,
    ThreeTap,
}

#[inline]
pub(crate) fn leaf_kind(family: PredictorFamily, mode: IntraMode) -> LeafKind {
    match family {
        PredictorFamily::Block | PredictorFamily::BlockRdpcm => LeafKind::Block,
        PredictorFamily::Sap if mode.is_angular() => LeafKind::Sap,
        PredictorFamily::Sap => LeafKind::Block,
        PredictorFamily::ThreeTap => LeafKind::ThreeTap,
    }
}

/// Reconstruction order of a pixel-wise leaf. Block-predicted leaves use
/// raster order.
pub fn leaf_scan(family: PredictorFamily, mode: IntraMode, neighbors: &NeighborConfig) -> ScanOrder {
    match leaf_kind(family, mode) {
        LeafKind::Block => ScanOrder::Raster,
        LeafKind::Sap => sap_scan(mode),
        LeafKind::ThreeTap => neighbors.get(mode).scan,
    }
}

/// Residual differencing applied on top of the prediction, if any.
#[inline]
pub(crate) fn rdpcm_direction(family: PredictorFamily, mode: IntraMode) -> Option<RdpcmDirection> {
    match (family, mode) {
        (PredictorFamily::BlockRdpcm, IntraMode::HORIZONTAL) => Some(RdpcmDirection::Horizontal),
        (PredictorFamily::BlockRdpcm, IntraMode::VERTICAL) => Some(RdpcmDirection::Vertical),
        _ => None,
    }
}

/// Block positions `(dx, dy)` in `scan` order.
pub(crate) fn scan_positions(size: usize, scan: ScanOrder) -> impl Iterator<Item = (usize, usize)> {
    (0..size * size).map(move |i| match scan {
        ScanOrder::Raster => (i % size, i / size),
        ScanOrder::ColumnMajor => (i / size, i % size),
    })
}

/// Predicts one pixel of a pixel-wise leaf.
#[inline]
pub(crate) fn predict_pixel<S: CausalSamples + ?Sized>(
    kind: LeafKind,
    samples: &S,
    x: usize,
    y: usize,
    mode: IntraMode,
    block_size: usize,
    config: &CodecConfig,
) -> u16 {
    match kind {
        LeafKind::Sap => predict_pixel_sap(samples, x, y, mode),
        LeafKind::ThreeTap => {
            predict_pixel_3tap(samples, x, y, mode, block_size, &config.weights, &config.neighbors)
        }
        LeafKind::Block => unreachable!("block leaves are predicted as a whole"),
    }
}

/// Prediction of a whole leaf in raster order, valid when every causal sample
/// inside the block is already final (always true at the encoder).
pub(crate) fn predict_leaf<S: CausalSamples + ?Sized>(
    view: &S,
    refs: &ReferenceArray,
    block: BlockRect,
    mode: IntraMode,
    config: &CodecConfig,
) -> Vec<u16> {
    let kind = leaf_kind(config.family, mode);
    if kind == LeafKind::Block {
        return predict_block(refs, mode);
    }
    let samples = BlockSamples::new(view, refs, block);
    let n = block.size;
    let mut out = Vec::with_capacity(n * n);
    for dy in 0..n {
        for dx in 0..n {
            out.push(predict_pixel(kind, &samples, block.x + dx, block.y + dy, mode, n, config));
        }
    }
    out
}

/// Reference array of `block` as seen through `view`.
#[inline]
pub(crate) fn leaf_references<S: CausalSamples + ?Sized>(view: &S, block: BlockRect) -> ReferenceArray {
    build_reference_array(view, block.x, block.y, block.size)
}

/// Substituted 3-tap neighbour values of every pixel of a leaf, in raster
/// order.
pub(crate) fn leaf_taps<S: CausalSamples + ?Sized>(
    view: &S,
    block: BlockRect,
    mode: IntraMode,
    neighbors: &NeighborConfig,
    mut f: impl FnMut(usize, usize, [u16; 3]),
) {
    let refs = leaf_references(view, block);
    let samples = BlockSamples::new(view, &refs, block);
    for dy in 0..block.size {
        for dx in 0..block.size {
            let (x, y) = (block.x + dx, block.y + dy);
            f(x, y, gather_3tap(&samples, x, y, mode, neighbors));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::Plane;
    use crate::prediction::InBounds;

    #[test]
    fn block_samples_read_references_on_the_border() {
        let plane = Plane::from_fn(16, 16, 8, |x, y| (x + 16 * y) as u16).unwrap();
        let view = InBounds(&plane);
        let block = BlockRect::new(4, 4, 4);
        let refs = ReferenceArray::constant(4, 7);
        let s = BlockSamples::new(&view, &refs, block);
        assert_eq!(s.sample(3, 3), Some(7));
        assert_eq!(s.sample(11, 3), Some(7));
        assert_eq!(s.sample(3, 11), Some(7));
        assert_eq!(s.sample(5, 5), Some(plane.get(5, 5)));
        assert_eq!(s.sample(12, 3), Some(plane.get(12, 3)));
        assert_eq!(s.sample(2, 5), Some(plane.get(2, 5)));
    }

    #[test]
    fn scan_orders() {
        let r: Vec<_> = scan_positions(2, ScanOrder::Raster).collect();
        assert_eq!(r, [(0, 0), (1, 0), (0, 1), (1, 1)]);
        let c: Vec<_> = scan_positions(2, ScanOrder::ColumnMajor).collect();
        assert_eq!(c, [(0, 0), (0, 1), (1, 0), (1, 1)]);
    }

    #[test]
    fn rdpcm_only_for_pure_directions() {
        for mode in IntraMode::all() {
            let d = rdpcm_direction(PredictorFamily::BlockRdpcm, mode);
            assert_eq!(d.is_some(), mode == IntraMode::HORIZONTAL || mode == IntraMode::VERTICAL);
            assert_eq!(rdpcm_direction(PredictorFamily::Block, mode), None);
        }
    }
}
