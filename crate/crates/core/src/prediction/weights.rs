use alloc::vec::Vec;
use core::fmt;

use super::mode::IntraMode;

/// Number of PU size classes (4, 8, 16, 32).
pub const SIZE_CLASSES: usize = 4;

/// Size class of a square block: 4 → 0, 8 → 1, 16 → 2, 32 → 3.
#[inline]
pub fn size_class(size: usize) -> usize {
    debug_assert!(size.is_power_of_two() && (4..=32).contains(&size));
    (size.trailing_zeros() as usize).saturating_sub(2).min(SIZE_CLASSES - 1)
}

/// Shipped 3-tap weights in 1/32 units, one row per canonical slot 0..=18.
/// Slot `k` serves mode `k` and, for `2 <= k <= 17`, its partner `36 - k`.
pub const SHIPPED_TRIPLES: [[i32; 3]; 19] = [
    [22, -11, 21],
    [19, -1, 14],
    [-11, 29, 14],
    [0, 22, 10],
    [10, 22, 0],
    [10, 14, 8],
    [25, 12, -5],
    [19, 4, 9],
    [29, 5, -2],
    [31, -2, 3],
    [30, -25, 27],
    [32, -11, 11],
    [27, -16, 21],
    [23, 0, 9],
    [15, 6, 11],
    [22, 14, -4],
    [14, 22, -4],
    [5, 29, -2],
    [7, 14, 11],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModePooling {
    /// Modes `k` and `36 - k` share one slot: 19 slots.
    Symmetric,
    /// One slot per mode: 35 slots.
    PerMode,
}

/// How (mode, block size) pairs map onto weight slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SlotLayout {
    pub pooling: ModePooling,
    pub per_block_size: bool,
}

impl SlotLayout {
    pub const SHIPPED: SlotLayout = SlotLayout {
        pooling: ModePooling::Symmetric,
        per_block_size: false,
    };

    pub const fn mode_slots(self) -> usize {
        match self.pooling {
            ModePooling::Symmetric => 19,
            ModePooling::PerMode => IntraMode::COUNT,
        }
    }

    pub const fn slot_count(self) -> usize {
        if self.per_block_size {
            self.mode_slots() * SIZE_CLASSES
        } else {
            self.mode_slots()
        }
    }

    #[inline]
    pub fn mode_slot(self, mode: IntraMode) -> usize {
        match self.pooling {
            ModePooling::Symmetric => mode.canonical_slot(),
            ModePooling::PerMode => mode.index() as usize,
        }
    }

    #[inline]
    pub fn slot(self, mode: IntraMode, block_size: usize) -> usize {
        let base = self.mode_slot(mode);
        if self.per_block_size {
            base * SIZE_CLASSES + size_class(block_size)
        } else {
            base
        }
    }

    /// Representative mode of a slot's mode part (the lowest mode using it).
    pub fn slot_mode(self, slot: usize) -> IntraMode {
        let base = if self.per_block_size { slot / SIZE_CLASSES } else { slot };
        IntraMode::new(base as u8).expect("slot within layout")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightError {
    UnsupportedShift(u32),
    SlotCount { expected: usize, actual: usize },
    BadSum { slot: usize, sum: i32, expected: i32 },
    OutOfRange { slot: usize, value: i32, bound: i32 },
}

impl fmt::Display for WeightError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightError::UnsupportedShift(s) => write!(f, "unsupported weight precision of {s} bits"),
            WeightError::SlotCount { expected, actual } => {
                write!(f, "weight table needs {expected} slots, got {actual}")
            }
            WeightError::BadSum { slot, sum, expected } => {
                write!(f, "slot {slot} weights sum to {sum}, expected {expected}")
            }
            WeightError::OutOfRange { slot, value, bound } => {
                write!(f, "slot {slot} weight {value} exceeds ±{bound}")
            }
        }
    }
}

impl core::error::Error for WeightError {}

/// Fixed-point 3-tap weights. Every triple sums to `1 << shift`, so a
/// constant neighbourhood predicts itself exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightTable {
    shift: u32,
    layout: SlotLayout,
    triples: Vec<[i32; 3]>,
}

impl Default for WeightTable {
    fn default() -> Self {
        WeightTable::shipped()
    }
}

impl WeightTable {
    pub const SHIPPED_SHIFT: u32 = 5;

    /// The 19 symmetric 5-bit triples compiled into the codec.
    pub fn shipped() -> Self {
        WeightTable::new(Self::SHIPPED_SHIFT, SlotLayout::SHIPPED, SHIPPED_TRIPLES.to_vec())
            .expect("shipped weights satisfy the table invariants")
    }

    pub fn new(shift: u32, layout: SlotLayout, triples: Vec<[i32; 3]>) -> Result<Self, WeightError> {
        if !(1..=12).contains(&shift) {
            return Err(WeightError::UnsupportedShift(shift));
        }
        if triples.len() != layout.slot_count() {
            return Err(WeightError::SlotCount {
                expected: layout.slot_count(),
                actual: triples.len(),
            });
        }
        let table = WeightTable { shift, layout, triples };
        for slot in 0..table.triples.len() {
            table.check_slot(slot, table.triples[slot])?;
        }
        Ok(table)
    }

    /// Largest admissible weight magnitude: 63 for 5-bit tables.
    #[inline]
    pub fn bound(&self) -> i32 {
        (1 << (self.shift + 1)) - 1
    }

    #[inline]
    pub fn unit(&self) -> i32 {
        1 << self.shift
    }

    fn check_slot(&self, slot: usize, t: [i32; 3]) -> Result<(), WeightError> {
        let sum = t[0] + t[1] + t[2];
        if sum != self.unit() {
            return Err(WeightError::BadSum {
                slot,
                sum,
                expected: self.unit(),
            });
        }
        let bound = self.bound();
        if let Some(&value) = t.iter().find(|v| v.abs() > bound) {
            return Err(WeightError::OutOfRange { slot, value, bound });
        }
        Ok(())
    }

    #[inline]
    pub fn shift(&self) -> u32 {
        self.shift
    }

    #[inline]
    pub fn layout(&self) -> SlotLayout {
        self.layout
    }

    #[inline]
    pub fn triples(&self) -> &[[i32; 3]] {
        &self.triples
    }

    #[inline]
    pub fn slot_count(&self) -> usize {
        self.triples.len()
    }

    #[inline]
    pub fn triple(&self, mode: IntraMode, block_size: usize) -> [i32; 3] {
        self.triples[self.layout.slot(mode, block_size)]
    }

    #[inline]
    pub fn slot_triple(&self, slot: usize) -> [i32; 3] {
        self.triples[slot]
    }

    /// Copy with one slot replaced, validated against the table invariants.
    pub fn with_slot(&self, slot: usize, triple: [i32; 3]) -> Result<Self, WeightError> {
        self.check_slot(slot, triple)?;
        let mut out = self.clone();
        out.triples[slot] = triple;
        Ok(out)
    }

    /// Same weights spread over another layout (per-mode copies, per-size
    /// copies) and rescaled to `shift` bits.
    pub fn expanded(&self, layout: SlotLayout, shift: u32) -> Result<Self, WeightError> {
        let mut triples = Vec::with_capacity(layout.slot_count());
        for slot in 0..layout.slot_count() {
            let mode = layout.slot_mode(slot);
            let size = if layout.per_block_size {
                4 << (slot % SIZE_CLASSES)
            } else {
                4
            };
            let t = self.triple(mode, size);
            triples.push(rescale_triple(t, self.shift, shift));
        }
        WeightTable::new(shift, layout, triples)
    }
}

/// Rescales a triple between precisions keeping its exact sum.
fn rescale_triple(t: [i32; 3], from: u32, to: u32) -> [i32; 3] {
    if to >= from {
        let k = to - from;
        return [t[0] << k, t[1] << k, t[2] << k];
    }
    let k = from - to;
    let half = 1 << (k - 1);
    let mut out = [(t[0] + half) >> k, (t[1] + half) >> k, 0];
    out[2] = (1 << to) - out[0] - out[1];
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_table_invariants() {
        let w = WeightTable::shipped();
        assert_eq!(w.slot_count(), 19);
        assert_eq!(w.shift(), 5);
        for t in w.triples() {
            assert_eq!(t.iter().sum::<i32>(), 32);
            assert!(t.iter().all(|v| (-25..=32).contains(v)));
        }
        // Table rows used through their shared slots.
        let m = |i| IntraMode::new(i).unwrap();
        assert_eq!(w.triple(m(0), 4), [22, -11, 21]);
        assert_eq!(w.triple(m(10), 16), [30, -25, 27]);
        assert_eq!(w.triple(m(26), 32), [30, -25, 27]);
        assert_eq!(w.triple(m(22), 8), [15, 6, 11]);
        assert_eq!(w.triple(m(24), 8), [27, -16, 21]);
        assert_eq!(w.triple(m(19), 4), w.triple(m(17), 4));
    }

    #[test]
    fn layouts_count_slots() {
        let per_size = SlotLayout {
            pooling: ModePooling::PerMode,
            per_block_size: true,
        };
        assert_eq!(per_size.slot_count(), 140);
        assert_eq!(SlotLayout::SHIPPED.slot_count(), 19);
        let m = IntraMode::new(30).unwrap();
        assert_eq!(per_size.slot(m, 16), 30 * 4 + 2);
        assert_eq!(per_size.slot_mode(30 * 4 + 2), m);
        assert_eq!(SlotLayout::SHIPPED.slot(m, 16), 6);
    }

    #[test]
    fn expanded_keeps_predictions() {
        let w = WeightTable::shipped();
        let layout = SlotLayout {
            pooling: ModePooling::PerMode,
            per_block_size: true,
        };
        let e = w.expanded(layout, 10).unwrap();
        for mode in IntraMode::all() {
            for size in [4, 8, 16, 32] {
                let a = w.triple(mode, size);
                let b = e.triple(mode, size);
                assert_eq!([a[0] * 32, a[1] * 32, a[2] * 32], b);
            }
        }
        let back = e.expanded(SlotLayout::SHIPPED, 5).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn rejects_invalid_triples() {
        let mut t = SHIPPED_TRIPLES.to_vec();
        t[3] = [1, 1, 1];
        assert!(matches!(
            WeightTable::new(5, SlotLayout::SHIPPED, t),
            Err(WeightError::BadSum { slot: 3, sum: 3, expected: 32 })
        ));
        let mut t = SHIPPED_TRIPLES.to_vec();
        t[0] = [64, -32, 0];
        assert!(matches!(
            WeightTable::new(5, SlotLayout::SHIPPED, t),
            Err(WeightError::OutOfRange { slot: 0, value: 64, .. })
        ));
        assert!(WeightTable::new(5, SlotLayout::SHIPPED, SHIPPED_TRIPLES[..18].to_vec()).is_err());
    }

    #[test]
    fn size_classes() {
        assert_eq!(size_class(4), 0);
        assert_eq!(size_class(8), 1);
        assert_eq!(size_class(16), 2);
        assert_eq!(size_class(32), 3);
    }
}
