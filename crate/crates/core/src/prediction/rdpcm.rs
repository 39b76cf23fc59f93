//! Residual DPCM: differencing of block-prediction residuals along the
//! prediction direction of the pure horizontal and vertical modes.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RdpcmDirection {
    Horizontal,
    Vertical,
}

/// In place: every residual except the first column (horizontal) or first
/// row (vertical) becomes its difference from the previous one.
pub fn rdpcm_forward(block: &mut [i32], size: usize, direction: RdpcmDirection) {
    debug_assert_eq!(block.len(), size * size);
    match direction {
        RdpcmDirection::Horizontal => {
            for row in block.chunks_exact_mut(size) {
                for x in (1..size).rev() {
                    row[x] -= row[x - 1];
                }
            }
        }
        RdpcmDirection::Vertical => {
            for y in (1..size).rev() {
                for x in 0..size {
                    block[y * size + x] -= block[(y - 1) * size + x];
                }
            }
        }
    }
}

/// Prefix sums undoing [`rdpcm_forward`].
pub fn rdpcm_inverse(block: &mut [i32], size: usize, direction: RdpcmDirection) {
    debug_assert_eq!(block.len(), size * size);
    match direction {
        RdpcmDirection::Horizontal => {
            for row in block.chunks_exact_mut(size) {
                for x in 1..size {
                    row[x] += row[x - 1];
                }
            }
        }
        RdpcmDirection::Vertical => {
            for y in 1..size {
                for x in 0..size {
                    block[y * size + x] += block[(y - 1) * size + x];
                }
            }
        }
    }
}
