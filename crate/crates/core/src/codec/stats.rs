use core::time::Duration;

use super::encoder::{QuadTreeNode, MODE_BITS};
use crate::prediction::{size_class, IntraMode, SIZE_CLASSES};

/// Counters of one encode, or a sum over several.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodeStats {
    /// Stream length in bits before the final byte padding.
    pub total_bits: u64,
    /// Fixed header plus embedded tables.
    pub header_bits: u64,
    pub split_flag_bits: u64,
    pub mode_bits: u64,
    pub residual_bits: u64,
    pub mode_counts: [u64; IntraMode::COUNT],
    /// Leaves per size class 4, 8, 16, 32.
    pub size_counts: [u64; SIZE_CLASSES],
    /// Pixels per size class.
    pub size_pixels: [u64; SIZE_CLASSES],
    pub leaf_count: u64,
    /// Pixels coded, including padding.
    pub pixels: u64,
    /// Sum of squared prediction errors.
    pub residual_sse: u64,
    /// Filled in by callers that time the encode.
    pub encode_time: Duration,
    pub decode_time: Duration,
}

impl Default for EncodeStats {
    fn default() -> Self {
        EncodeStats {
            total_bits: 0,
            header_bits: 0,
            split_flag_bits: 0,
            mode_bits: 0,
            residual_bits: 0,
            mode_counts: [0; IntraMode::COUNT],
            size_counts: [0; SIZE_CLASSES],
            size_pixels: [0; SIZE_CLASSES],
            leaf_count: 0,
            pixels: 0,
            residual_sse: 0,
            encode_time: Duration::ZERO,
            decode_time: Duration::ZERO,
        }
    }
}

impl EncodeStats {
    /// Leaf counters of a set of CTU trees. Bit totals other than
    /// `mode_bits` and `residual_bits` are left at zero.
    pub fn from_trees(trees: &[QuadTreeNode]) -> Self {
        let mut s = EncodeStats::default();
        for t in trees {
            t.for_each_leaf(&mut |node, leaf| {
                let c = size_class(node.size);
                s.mode_counts[leaf.mode.index() as usize] += 1;
                s.size_counts[c] += 1;
                s.size_pixels[c] += (node.size * node.size) as u64;
                s.leaf_count += 1;
                s.mode_bits += MODE_BITS;
                s.residual_bits += leaf.bits - MODE_BITS;
                s.residual_sse += leaf.sse;
            });
        }
        s
    }

    pub fn bits_per_pixel(&self) -> f64 {
        if self.pixels == 0 {
            0.0
        } else {
            self.total_bits as f64 / self.pixels as f64
        }
    }

    pub fn mse(&self) -> f64 {
        if self.pixels == 0 {
            0.0
        } else {
            self.residual_sse as f64 / self.pixels as f64
        }
    }

    pub fn accumulate(&mut self, other: &EncodeStats) {
        self.total_bits += other.total_bits;
        self.header_bits += other.header_bits;
        self.split_flag_bits += other.split_flag_bits;
        self.mode_bits += other.mode_bits;
        self.residual_bits += other.residual_bits;
        for (a, b) in self.mode_counts.iter_mut().zip(&other.mode_counts) {
            *a += b;
        }
        for (a, b) in self.size_counts.iter_mut().zip(&other.size_counts) {
            *a += b;
        }
        for (a, b) in self.size_pixels.iter_mut().zip(&other.size_pixels) {
            *a += b;
        }
        self.leaf_count += other.leaf_count;
        self.pixels += other.pixels;
        self.residual_sse += other.residual_sse;
        self.encode_time += other.encode_time;
        self.decode_time += other.decode_time;
    }
}

/// Aggregated selection frequencies in percent.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageSummary {
    pub totals: EncodeStats,
    pub mode_percent: [f64; IntraMode::COUNT],
    /// Share of leaves per size class.
    pub size_percent: [f64; SIZE_CLASSES],
    /// Share of pixels per size class.
    pub size_pixel_percent: [f64; SIZE_CLASSES],
}

impl UsageSummary {
    /// Modes ordered by selection count, most frequent first; ties by index.
    pub fn modes_by_rank(&self) -> [IntraMode; IntraMode::COUNT] {
        let mut order: [IntraMode; IntraMode::COUNT] =
            core::array::from_fn(|i| IntraMode::new(i as u8).expect("mode index"));
        order.sort_by(|a, b| {
            let ca = self.totals.mode_counts[a.index() as usize];
            let cb = self.totals.mode_counts[b.index() as usize];
            cb.cmp(&ca).then(a.index().cmp(&b.index()))
        });
        order
    }
}

fn percentages<const N: usize>(counts: &[u64; N]) -> [f64; N] {
    let total: u64 = counts.iter().sum();
    core::array::from_fn(|i| {
        if total == 0 {
            0.0
        } else {
            100.0 * counts[i] as f64 / total as f64
        }
    })
}

/// Sums encodes and normalizes their histograms to percentages.
pub fn collect_stats<'a>(stats: impl IntoIterator<Item = &'a EncodeStats>) -> UsageSummary {
    let mut totals = EncodeStats::default();
    for s in stats {
        totals.accumulate(s);
    }
    UsageSummary {
        mode_percent: percentages(&totals.mode_counts),
        size_percent: percentages(&totals.size_counts),
        size_pixel_percent: percentages(&totals.size_pixels),
        totals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::encoder::{LeafChoice, NodeContent};
    use alloc::vec;

    fn leaf(x: usize, size: usize, mode: u8) -> QuadTreeNode {
        QuadTreeNode {
            x,
            y: 0,
            size,
            content: NodeContent::Leaf(LeafChoice {
                mode: IntraMode::new(mode).unwrap(),
                residuals: vec![0; size * size],
                bits: MODE_BITS + (size * size) as u64,
                sse: 0,
            }),
        }
    }

    #[test]
    fn single_leaf_mode_frequency() {
        let s = EncodeStats::from_trees(&[leaf(0, 8, 10)]);
        let u = collect_stats([&s]);
        assert_eq!(u.mode_percent[10], 100.0);
        assert_eq!(u.modes_by_rank()[0], IntraMode::HORIZONTAL);
    }

    #[test]
    fn two_sizes_split_evenly() {
        let s = EncodeStats::from_trees(&[leaf(0, 4, 0), leaf(4, 8, 1)]);
        let u = collect_stats([&s]);
        assert_eq!(u.size_percent[0], 50.0);
        assert_eq!(u.size_percent[1], 50.0);
        assert_eq!(u.size_pixel_percent[0], 20.0);
        let sum: f64 = u.mode_percent.iter().sum();
        assert!((sum - 100.0).abs() < 1e-9);
        assert_eq!(s.mode_counts.iter().sum::<u64>(), s.leaf_count);
        assert_eq!(s.size_counts.iter().sum::<u64>(), s.leaf_count);
    }

    #[test]
    fn empty_summary_is_all_zero() {
        let u = collect_stats(core::iter::empty());
        assert!(u.mode_percent.iter().all(|&p| p == 0.0));
    }
}
