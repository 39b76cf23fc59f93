use alloc::vec::Vec;

use crate::codec::{encode_plane_detailed, CodecConfig, CodecError};
use crate::plane::Corpus;
use crate::prediction::SlotLayout;

/// Second-order statistics of `(o, a, b, c)` samples of one weight slot.
///
/// Sums are exact integers; 10-bit samples allow more than 10^12 pixels
/// before any sum can overflow.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct MomentAccumulator {
    /// `aa, ab, ac, bb, bc, cc`
    cross: [u64; 6],
    /// `oa, ob, oc`
    rhs: [u64; 3],
    oo: u64,
    count: u64,
}

impl MomentAccumulator {
    pub const fn new() -> Self {
        MomentAccumulator {
            cross: [0; 6],
            rhs: [0; 3],
            oo: 0,
            count: 0,
        }
    }

    #[inline]
    pub fn add(&mut self, o: u16, taps: [u16; 3]) {
        let [a, b, c] = taps.map(|t| t as u64);
        let o = o as u64;
        self.cross[0] += a * a;
        self.cross[1] += a * b;
        self.cross[2] += a * c;
        self.cross[3] += b * b;
        self.cross[4] += b * c;
        self.cross[5] += c * c;
        self.rhs[0] += o * a;
        self.rhs[1] += o * b;
        self.rhs[2] += o * c;
        self.oo += o * o;
        self.count += 1;
    }

    pub fn merge(&mut self, other: &MomentAccumulator) {
        for (x, y) in self.cross.iter_mut().zip(other.cross) {
            *x += y;
        }
        for (x, y) in self.rhs.iter_mut().zip(other.rhs) {
            *x += y;
        }
        self.oo += other.oo;
        self.count += other.count;
    }

    #[inline]
    pub fn count(&self) -> u64 {
        self.count
    }

    /// Symmetric matrix `Σ t tᵀ` over `t = (a, b, c)`.
    pub fn gram(&self) -> [[f64; 3]; 3] {
        let s = self.cross.map(|v| v as f64);
        [[s[0], s[1], s[2]], [s[1], s[3], s[4]], [s[2], s[4], s[5]]]
    }

    /// `Σ o t`.
    pub fn rhs(&self) -> [f64; 3] {
        self.rhs.map(|v| v as f64)
    }

    pub fn sum_oo(&self) -> f64 {
        self.oo as f64
    }

    /// `Σ (o - ρ·t)²` of the accumulated samples.
    pub fn sse(&self, rho: [f64; 3]) -> f64 {
        let g = self.gram();
        let r = self.rhs();
        let mut quad = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                quad += rho[i] * g[i][j] * rho[j];
            }
        }
        self.sum_oo() - 2.0 * (rho[0] * r[0] + rho[1] * r[1] + rho[2] * r[2]) + quad
    }
}

/// One accumulator per slot of a weight layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentSet {
    layout: SlotLayout,
    slots: Vec<MomentAccumulator>,
}

impl MomentSet {
    pub fn new(layout: SlotLayout) -> Self {
        MomentSet {
            layout,
            slots: alloc::vec![MomentAccumulator::new(); layout.slot_count()],
        }
    }

    pub fn layout(&self) -> SlotLayout {
        self.layout
    }

    pub fn slots(&self) -> &[MomentAccumulator] {
        &self.slots
    }

    pub fn slot(&self, slot: usize) -> &MomentAccumulator {
        &self.slots[slot]
    }

    pub fn slot_mut(&mut self, slot: usize) -> &mut MomentAccumulator {
        &mut self.slots[slot]
    }

    pub fn merge(&mut self, other: &MomentSet) {
        assert_eq!(self.layout, other.layout, "merging moments of different layouts");
        for (a, b) in self.slots.iter_mut().zip(&other.slots) {
            a.merge(b);
        }
    }

    pub fn total_count(&self) -> u64 {
        self.slots.iter().map(|s| s.count()).sum()
    }
}

/// Bits (without embedded tables) and prediction error of one corpus encode.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CorpusEncode {
    pub bits: u64,
    pub sse: u64,
    pub pixels: u64,
    /// Bits per plane, in corpus order.
    pub per_plane_bits: Vec<u64>,
}

impl CorpusEncode {
    pub fn mse(&self) -> f64 {
        if self.pixels == 0 {
            0.0
        } else {
            self.sse as f64 / self.pixels as f64
        }
    }
}

/// Encodes the corpus with `config` and gathers, for every coded pixel, its
/// original value and 3-tap neighbours under the mode its leaf selected.
///
/// The taps always follow `config.neighbors`, so an SAP-family encode yields
/// SAP mode assignments with 3-tap statistics. Symmetric partners share a
/// slot; their taps are transposes of each other, so `a`, `b` and `c` keep
/// their roles across the pair.
pub fn accumulate_moments(
    corpus: &Corpus,
    config: &CodecConfig,
    layout: SlotLayout,
) -> Result<(MomentSet, CorpusEncode), CodecError> {
    let mut moments = MomentSet::new(layout);
    let mut summary = CorpusEncode::default();
    for plane in corpus.planes() {
        let (m, e) = plane_moments(plane, config, layout)?;
        moments.merge(&m);
        summary.bits += e.bits;
        summary.sse += e.sse;
        summary.pixels += e.pixels;
        summary.per_plane_bits.extend(e.per_plane_bits);
    }
    Ok((moments, summary))
}

/// [`accumulate_moments`] for a single plane; merge results across shards.
pub fn plane_moments(
    plane: &crate::plane::Plane,
    config: &CodecConfig,
    layout: SlotLayout,
) -> Result<(MomentSet, CorpusEncode), CodecError> {
    let encoded = encode_plane_detailed(plane, config)?;
    let mut moments = MomentSet::new(layout);
    encoded.visit_leaf_taps(config, |mode, size, o, taps| {
        moments.slot_mut(layout.slot(mode, size)).add(o, taps);
    });
    let bits = super::stage2::coded_bits(&encoded.stats);
    let summary = CorpusEncode {
        bits,
        sse: encoded.stats.residual_sse,
        pixels: encoded.stats.pixels,
        per_plane_bits: alloc::vec![bits],
    };
    Ok((moments, summary))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_sample_products() {
        let mut acc = MomentAccumulator::new();
        acc.add(4, [2, 1, 1]);
        assert_eq!(acc.gram()[0], [4.0, 2.0, 2.0]);
        assert_eq!(acc.rhs(), [8.0, 4.0, 4.0]);
        assert_eq!(acc.count(), 1);
        assert_eq!(acc.sse([1.0, 1.0, 1.0]), 0.0);
        assert_eq!(acc.sse([0.0, 0.0, 0.0]), 16.0);
    }

    #[test]
    fn merge_is_additive() {
        let mut a = MomentAccumulator::new();
        let mut b = MomentAccumulator::new();
        let mut both = MomentAccumulator::new();
        for i in 0..50u16 {
            let s = (i * 7 % 255, [i, i * 3 % 200, 255 - i]);
            if i % 3 == 0 {
                a.add(s.0, s.1)
            } else {
                b.add(s.0, s.1)
            }
            both.add(s.0, s.1);
        }
        a.merge(&b);
        assert_eq!(a, both);
    }
}
