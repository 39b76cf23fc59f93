use alloc::vec::Vec;

use super::encoder::{padded_dims, residual_coder, MODE_BITS};
use super::leaf::{leaf_kind, leaf_references, predict_pixel, rdpcm_direction, scan_positions, BlockSamples, LeafKind};
use super::leaf::leaf_scan;
use super::order::{BlockRect, CodingOrder, FrameView};
use super::stream::{read_tables, StreamHeader, VERSION_EMBEDDED_TABLES};
use super::{CodecConfig, CodecError, MIN_BLOCK};
use crate::entropy::{BitReader, ContextSet, RiceCoder};
use crate::plane::Plane;
use crate::prediction::{predict_block, rdpcm_inverse, IntraMode};

/// Decodes a stream produced by [`encode_plane`](super::encode_plane).
///
/// Malformed input yields an error, never a panic: every read is bounds
/// checked and every reconstructed sample is range checked.
pub fn decode_plane<B: AsRef<[u8]> + ?Sized>(stream: &B) -> Result<Plane, CodecError> {
    let mut r = BitReader::new(stream.as_ref());
    let header = StreamHeader::read(&mut r)?;
    let mut config = CodecConfig::new(header.family).with_ctu_size(header.ctu_size());
    if header.version == VERSION_EMBEDDED_TABLES {
        let (weights, neighbors) = read_tables(&mut r)?;
        config.weights = weights;
        config.neighbors = neighbors;
    }
    let (width, height) = (header.width as usize, header.height as usize);
    let (pw, ph) = padded_dims(width, height);
    // Every sample costs at least one bit, so shorter payloads cannot be
    // valid; this also bounds the allocation below.
    if (pw * ph) as u64 > r.remaining() {
        return Err(CodecError::Truncated);
    }

    let order = CodingOrder::new(pw, ph, config.ctu_size);
    let mut dec = Decoder {
        reader: r,
        order,
        config: &config,
        coder: residual_coder(config.family, header.bit_depth),
        bit_depth: header.bit_depth,
        recon: alloc::vec![0u16; pw * ph],
        contexts: ContextSet::new(),
    };
    let mut leaves = Vec::new();
    for ctu in order.ctus() {
        leaves.clear();
        dec.read_tree(ctu, &mut leaves)?;
        for &leaf in &leaves {
            dec.decode_leaf(leaf)?;
        }
    }
    let plane = Plane::new(pw, ph, header.bit_depth, dec.recon).map_err(|_| CodecError::Corrupt("sample out of range"))?;
    Ok(if (pw, ph) == (width, height) {
        plane
    } else {
        plane.crop(width, height)
    })
}

struct Decoder<'a> {
    reader: BitReader<'a>,
    order: CodingOrder,
    config: &'a CodecConfig,
    coder: RiceCoder,
    bit_depth: u8,
    recon: Vec<u16>,
    contexts: ContextSet,
}

impl Decoder<'_> {
    fn read_tree(&mut self, block: BlockRect, out: &mut Vec<BlockRect>) -> Result<(), CodecError> {
        if !self.order.in_frame(block.x, block.y) {
            return Ok(());
        }
        let fits = self.order.fits(&block);
        let split = if fits && block.size > MIN_BLOCK {
            self.reader.read_bit()?
        } else {
            !fits
        };
        if split {
            for q in block.quadrants() {
                self.read_tree(q, out)?;
            }
        } else {
            out.push(block);
        }
        Ok(())
    }

    fn decode_leaf(&mut self, block: BlockRect) -> Result<(), CodecError> {
        let code = self.reader.read_bits(MODE_BITS as u32)? as u8;
        let mode = IntraMode::new(code).ok_or(CodecError::Corrupt("mode index out of range"))?;
        let n = block.size;
        let mut residuals = Vec::with_capacity(n * n);
        let ctx = self.contexts.get_mut(mode, n);
        for _ in 0..n * n {
            residuals.push(self.coder.decode(ctx, &mut self.reader)?);
        }
        let family = self.config.family;
        if let Some(dir) = rdpcm_direction(family, mode) {
            rdpcm_inverse(&mut residuals, n, dir);
        }

        let max = ((1u32 << self.bit_depth) - 1) as i32;
        let width = self.order.width();
        let refs = {
            let view = FrameView::new(&self.recon, &self.order, block, self.bit_depth);
            leaf_references(&view, block)
        };
        let kind = leaf_kind(family, mode);
        if kind == LeafKind::Block {
            let pred = predict_block(&refs, mode);
            for dy in 0..n {
                for dx in 0..n {
                    let v = pred[dy * n + dx] as i32 + residuals[dy * n + dx];
                    if !(0..=max).contains(&v) {
                        return Err(CodecError::Corrupt("sample out of range"));
                    }
                    self.recon[(block.y + dy) * width + block.x + dx] = v as u16;
                }
            }
            return Ok(());
        }
        let scan = leaf_scan(family, mode, &self.config.neighbors);
        for (dx, dy) in scan_positions(n, scan) {
            let (x, y) = (block.x + dx, block.y + dy);
            let p = {
                let view = FrameView::new(&self.recon, &self.order, block, self.bit_depth);
                let samples = BlockSamples::new(&view, &refs, block);
                predict_pixel(kind, &samples, x, y, mode, n, self.config)
            };
            let v = p as i32 + residuals[dy * n + dx];
            if !(0..=max).contains(&v) {
                return Err(CodecError::Corrupt("sample out of range"));
            }
            self.recon[y * width + x] = v as u16;
        }
        Ok(())
    }
}
