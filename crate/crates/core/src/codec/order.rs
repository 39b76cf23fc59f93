//! Coding order and sample availability.
//!
//! CTUs are coded in raster order; inside a CTU the quadtree is walked
//! depth-first in z-order. Every 4×4 unit therefore has a fixed position in
//! the coding order regardless of how its CTU is partitioned, which lets the
//! encoder evaluate candidate partitions against the same availability the
//! decoder will see.

use crate::prediction::CausalSamples;

/// Square block inside the (padded) frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlockRect {
    pub x: usize,
    pub y: usize,
    pub size: usize,
}

impl BlockRect {
    pub const fn new(x: usize, y: usize, size: usize) -> Self {
        BlockRect { x, y, size }
    }

    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        x >= self.x && y >= self.y && x < self.x + self.size && y < self.y + self.size
    }

    /// Children in z-order.
    pub fn quadrants(&self) -> [BlockRect; 4] {
        let h = self.size / 2;
        [
            BlockRect::new(self.x, self.y, h),
            BlockRect::new(self.x + h, self.y, h),
            BlockRect::new(self.x, self.y + h, h),
            BlockRect::new(self.x + h, self.y + h, h),
        ]
    }
}

#[inline]
fn spread_bits(mut v: u32) -> u32 {
    v &= 0xff;
    v = (v | (v << 4)) & 0x0f0f;
    v = (v | (v << 2)) & 0x3333;
    (v | (v << 1)) & 0x5555
}

/// Frame geometry plus CTU grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodingOrder {
    width: usize,
    height: usize,
    ctu_log2: u32,
    ctus_per_row: usize,
}

impl CodingOrder {
    pub fn new(width: usize, height: usize, ctu_size: usize) -> Self {
        debug_assert!(ctu_size.is_power_of_two() && ctu_size >= 4);
        CodingOrder {
            width,
            height,
            ctu_log2: ctu_size.trailing_zeros(),
            ctus_per_row: width.div_ceil(ctu_size),
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn ctu_size(&self) -> usize {
        1 << self.ctu_log2
    }

    /// CTU origins in coding order.
    pub fn ctus(&self) -> impl Iterator<Item = BlockRect> + '_ {
        let s = self.ctu_size();
        (0..self.height.div_ceil(s))
            .flat_map(move |row| (0..self.ctus_per_row).map(move |col| BlockRect::new(col * s, row * s, s)))
    }

    #[inline]
    pub fn fits(&self, b: &BlockRect) -> bool {
        b.x + b.size <= self.width && b.y + b.size <= self.height
    }

    #[inline]
    pub fn in_frame(&self, x: usize, y: usize) -> bool {
        x < self.width && y < self.height
    }

    #[inline]
    fn ctu_index(&self, x: usize, y: usize) -> usize {
        (y >> self.ctu_log2) * self.ctus_per_row + (x >> self.ctu_log2)
    }

    #[inline]
    fn z_index(&self, x: usize, y: usize) -> u32 {
        let mask = (1usize << self.ctu_log2) - 1;
        let ux = ((x & mask) >> 2) as u32;
        let uy = ((y & mask) >> 2) as u32;
        spread_bits(ux) | (spread_bits(uy) << 1)
    }

    /// True when `(x, y)` lies in a 4×4 unit coded before `block` starts.
    #[inline]
    pub fn precedes(&self, x: usize, y: usize, block: &BlockRect) -> bool {
        let cq = self.ctu_index(x, y);
        let cb = self.ctu_index(block.x, block.y);
        if cq != cb {
            return cq < cb;
        }
        self.z_index(x, y) < self.z_index(block.x, block.y)
    }
}

/// Samples visible while coding `block`: everything earlier in coding order
/// plus the block's own pixels (callers only request those already
/// reconstructed under the active scan).
#[derive(Clone, Copy)]
pub struct FrameView<'a> {
    samples: &'a [u16],
    order: &'a CodingOrder,
    block: BlockRect,
    bit_depth: u8,
}

impl<'a> FrameView<'a> {
    pub fn new(samples: &'a [u16], order: &'a CodingOrder, block: BlockRect, bit_depth: u8) -> Self {
        debug_assert_eq!(samples.len(), order.width() * order.height());
        FrameView {
            samples,
            order,
            block,
            bit_depth,
        }
    }
}

impl CausalSamples for FrameView<'_> {
    #[inline]
    fn bit_depth(&self) -> u8 {
        self.bit_depth
    }

    #[inline]
    fn sample(&self, x: isize, y: isize) -> Option<u16> {
        if x < 0 || y < 0 {
            return None;
        }
        let (x, y) = (x as usize, y as usize);
        if !self.order.in_frame(x, y) {
            return None;
        }
        if self.block.contains(x, y) || self.order.precedes(x, y, &self.block) {
            Some(self.samples[y * self.order.width() + x])
        } else {
            None
        }
    }
}
