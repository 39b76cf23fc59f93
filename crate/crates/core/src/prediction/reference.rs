use alloc::vec::Vec;

use crate::plane::Plane;

/// Read access to reconstructed samples under some availability rule.
pub trait CausalSamples {
    fn bit_depth(&self) -> u8;

    /// `None` when `(x, y)` is outside the frame or not reconstructed yet.
    fn sample(&self, x: isize, y: isize) -> Option<u16>;

    #[inline]
    fn mid_value(&self) -> u16 {
        1 << (self.bit_depth() - 1)
    }

    #[inline]
    fn max_value(&self) -> u16 {
        (1u16 << self.bit_depth()) - 1
    }
}

/// Treats every in-frame sample of a plane as reconstructed. Pixel-wise
/// predictors with causal neighbour offsets see exactly the whole-plane
/// prediction through this view.
#[derive(Clone, Copy)]
pub struct InBounds<'a>(pub &'a Plane);

impl CausalSamples for InBounds<'_> {
    #[inline]
    fn bit_depth(&self) -> u8 {
        self.0.bit_depth()
    }

    #[inline]
    fn sample(&self, x: isize, y: isize) -> Option<u16> {
        if x < 0 || y < 0 || x as usize >= self.0.width() || y as usize >= self.0.height() {
            None
        } else {
            Some(self.0.get(x as usize, y as usize))
        }
    }
}

/// Reference samples of an N×N block after substitution.
///
/// `above[0]` is the top-left corner, `above[1..=2N]` the row above the block
/// continuing to the top-right. `left[0..2N]` is the column left of the block
/// continuing to the bottom-left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceArray {
    size: usize,
    above: Vec<u16>,
    left: Vec<u16>,
}

impl ReferenceArray {
    pub fn from_parts(size: usize, above: Vec<u16>, left: Vec<u16>) -> Self {
        assert_eq!(above.len(), 2 * size + 1);
        assert_eq!(left.len(), 2 * size);
        ReferenceArray { size, above, left }
    }

    pub fn constant(size: usize, value: u16) -> Self {
        ReferenceArray::from_parts(
            size,
            alloc::vec![value; 2 * size + 1],
            alloc::vec![value; 2 * size],
        )
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn corner(&self) -> u16 {
        self.above[0]
    }

    /// Row above the block, `2N` samples starting at the block's first column.
    #[inline]
    pub fn top(&self) -> &[u16] {
        &self.above[1..]
    }

    /// Column left of the block, `2N` samples starting at the block's first row.
    #[inline]
    pub fn left(&self) -> &[u16] {
        &self.left
    }

    /// Corner followed by the top row.
    #[inline]
    pub fn above(&self) -> &[u16] {
        &self.above
    }

    /// Mirror of the array across the main diagonal (serves the transposed block).
    pub fn transposed(&self) -> ReferenceArray {
        let mut above = Vec::with_capacity(self.above.len());
        above.push(self.corner());
        above.extend_from_slice(&self.left);
        ReferenceArray {
            size: self.size,
            above,
            left: self.above[1..].to_vec(),
        }
    }
}

/// Gathers the reference samples of the block at `(bx, by)`.
///
/// Samples are scanned from the bottom-left end of the left column, up through
/// the corner and along the top row to its right end. Unavailable positions
/// take the value of the preceding scanned sample; a leading unavailable run
/// takes the first available one. With nothing available every entry is
/// `2^(bit_depth - 1)`.
pub fn build_reference_array<S: CausalSamples + ?Sized>(
    recon: &S,
    bx: usize,
    by: usize,
    size: usize,
) -> ReferenceArray {
    let n = size as isize;
    let (bx, by) = (bx as isize, by as isize);
    // Scan order: left column bottom→top, corner, top row left→right.
    let mut scan: Vec<Option<u16>> = Vec::with_capacity(4 * size + 1);
    for dy in (0..2 * n).rev() {
        scan.push(recon.sample(bx - 1, by + dy));
    }
    scan.push(recon.sample(bx - 1, by - 1));
    for dx in 0..2 * n {
        scan.push(recon.sample(bx + dx, by - 1));
    }

    let filled: Vec<u16> = match scan.iter().find_map(|s| *s) {
        None => alloc::vec![recon.mid_value(); scan.len()],
        Some(first) => {
            let mut prev = first;
            scan.iter()
                .map(|s| {
                    if let Some(v) = s {
                        prev = *v;
                    }
                    prev
                })
                .collect()
        }
    };

    let two_n = 2 * size;
    let left: Vec<u16> = filled[..two_n].iter().rev().copied().collect();
    let above = filled[two_n..].to_vec();
    ReferenceArray { size, above, left }
}
