//! Bit I/O and context-adaptive Golomb-Rice coding of residuals.

mod bits;
mod rice;

pub use bits::{BitReader, BitWriter, Truncated};
pub use rice::{unzigzag, zigzag, RiceCoder, RiceContext, MAX_K, RESET_COUNT, UNARY_LIMIT};

use crate::prediction::{size_class, IntraMode, SIZE_CLASSES};

/// Residual contexts: 4 mode groups × 4 block-size classes.
pub const CONTEXT_COUNT: usize = 4 * SIZE_CLASSES;

/// All residual contexts of one frame.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ContextSet {
    contexts: [RiceContext; CONTEXT_COUNT],
}

impl ContextSet {
    pub fn new() -> Self {
        ContextSet::default()
    }

    #[inline]
    pub fn index(mode: IntraMode, block_size: usize) -> usize {
        mode.group().index() * SIZE_CLASSES + size_class(block_size)
    }

    #[inline]
    pub fn get(&self, mode: IntraMode, block_size: usize) -> &RiceContext {
        &self.contexts[Self::index(mode, block_size)]
    }

    #[inline]
    pub fn get_mut(&mut self, mode: IntraMode, block_size: usize) -> &mut RiceContext {
        &mut self.contexts[Self::index(mode, block_size)]
    }
}
