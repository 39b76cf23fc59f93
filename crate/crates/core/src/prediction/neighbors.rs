use core::fmt;

use super::mode::{IntraMode, ModeGroup};

/// Order in which the pixels of a block are reconstructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScanOrder {
    /// Rows top to bottom, each left to right.
    Raster,
    /// Columns left to right, each top to bottom.
    ColumnMajor,
}

impl ScanOrder {
    pub fn transposed(self) -> ScanOrder {
        match self {
            ScanOrder::Raster => ScanOrder::ColumnMajor,
            ScanOrder::ColumnMajor => ScanOrder::Raster,
        }
    }

    /// True when an offset points at a pixel reconstructed earlier in this scan.
    pub fn is_causal(self, dx: i8, dy: i8) -> bool {
        match self {
            ScanOrder::Raster => dy < 0 || (dy == 0 && dx < 0),
            ScanOrder::ColumnMajor => dx < 0 || (dx == 0 && dy < 0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ScanOrder::Raster => "raster",
            ScanOrder::ColumnMajor => "column",
        }
    }

    pub fn from_name(s: &str) -> Option<ScanOrder> {
        match s {
            "raster" => Some(ScanOrder::Raster),
            "column" | "column-major" => Some(ScanOrder::ColumnMajor),
            _ => None,
        }
    }
}

/// Neighbour position relative to the predicted pixel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Offset {
    pub dx: i8,
    pub dy: i8,
}

impl Offset {
    pub const LEFT: Offset = Offset::new(-1, 0);
    pub const UP: Offset = Offset::new(0, -1);
    pub const UP_LEFT: Offset = Offset::new(-1, -1);
    pub const UP_RIGHT: Offset = Offset::new(1, -1);
    pub const DOWN_LEFT: Offset = Offset::new(-1, 1);

    pub const fn new(dx: i8, dy: i8) -> Offset {
        Offset { dx, dy }
    }

    pub const fn transposed(self) -> Offset {
        Offset::new(self.dy, self.dx)
    }
}

/// Taps `a`, `b`, `c` of one mode plus the scan that makes them causal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeNeighbors {
    pub taps: [Offset; 3],
    pub scan: ScanOrder,
}

impl ModeNeighbors {
    pub fn transposed(self) -> ModeNeighbors {
        ModeNeighbors {
            taps: self.taps.map(Offset::transposed),
            scan: self.scan.transposed(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NeighborError {
    NotCausal { mode: u8, tap: usize },
    TooFar { mode: u8, tap: usize },
    Asymmetric { mode: u8 },
    DuplicateTap { mode: u8 },
}

impl fmt::Display for NeighborError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NeighborError::NotCausal { mode, tap } => {
                write!(f, "mode {mode} tap {tap} is not reconstructed before use under its scan")
            }
            NeighborError::TooFar { mode, tap } => write!(f, "mode {mode} tap {tap} is more than 4 pixels away"),
            NeighborError::Asymmetric { mode } => {
                write!(f, "mode {mode} taps are not the transpose of its symmetric partner")
            }
            NeighborError::DuplicateTap { mode } => write!(f, "mode {mode} repeats a tap position"),
        }
    }
}

impl core::error::Error for NeighborError {}

/// Per-mode neighbour taps of the 3-tap predictor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NeighborConfig {
    modes: [ModeNeighbors; IntraMode::COUNT],
}

impl Default for NeighborConfig {
    fn default() -> Self {
        NeighborConfig::shipped()
    }
}

const MAX_REACH: i8 = 4;

impl NeighborConfig {
    /// Default taps per mode group.
    ///
    /// * modes 0, 1, 10..=18: left, upper-left, upper (raster)
    /// * modes 19..=26: upper, upper-left, left (raster)
    /// * modes 2..=9: left, lower-left, upper (column-major)
    /// * modes 27..=34: upper, upper-right, left (raster)
    pub fn shipped() -> Self {
        let horizontal = ModeNeighbors {
            taps: [Offset::LEFT, Offset::UP_LEFT, Offset::UP],
            scan: ScanOrder::Raster,
        };
        let below_left = ModeNeighbors {
            taps: [Offset::LEFT, Offset::DOWN_LEFT, Offset::UP],
            scan: ScanOrder::ColumnMajor,
        };
        let vertical = ModeNeighbors {
            taps: [Offset::UP, Offset::UP_LEFT, Offset::LEFT],
            scan: ScanOrder::Raster,
        };
        let above_right = below_left.transposed();
        let modes = core::array::from_fn(|i| match IntraMode::new(i as u8).unwrap().group() {
            ModeGroup::BelowLeft => below_left,
            ModeGroup::Horizontal => horizontal,
            ModeGroup::Vertical => vertical,
            ModeGroup::AboveRight => above_right,
        });
        NeighborConfig { modes }
    }

    pub fn new(modes: [ModeNeighbors; IntraMode::COUNT]) -> Result<Self, NeighborError> {
        let config = NeighborConfig { modes };
        config.validate()?;
        Ok(config)
    }

    /// Checks causality of every tap and the transposition between
    /// symmetric partners.
    pub fn validate(&self) -> Result<(), NeighborError> {
        for mode in IntraMode::all() {
            let m = self.get(mode);
            for (tap, o) in m.taps.iter().enumerate() {
                if !m.scan.is_causal(o.dx, o.dy) {
                    return Err(NeighborError::NotCausal { mode: mode.index(), tap });
                }
                if o.dx.abs() > MAX_REACH || o.dy.abs() > MAX_REACH {
                    return Err(NeighborError::TooFar { mode: mode.index(), tap });
                }
            }
            if m.taps[0] == m.taps[1] || m.taps[1] == m.taps[2] || m.taps[0] == m.taps[2] {
                return Err(NeighborError::DuplicateTap { mode: mode.index() });
            }
            // Scans may differ between partners: with every tap causal the
            // scan does not change any prediction.
            if let Some(p) = mode.symmetric_partner() {
                if self.get(p).taps != m.transposed().taps {
                    return Err(NeighborError::Asymmetric { mode: mode.index() });
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn get(&self, mode: IntraMode) -> ModeNeighbors {
        self.modes[mode.index() as usize]
    }

    pub fn modes(&self) -> &[ModeNeighbors; IntraMode::COUNT] {
        &self.modes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_config_is_valid() {
        let c = NeighborConfig::shipped();
        c.validate().unwrap();
        assert_eq!(c.get(IntraMode::HORIZONTAL).taps, [Offset::LEFT, Offset::UP_LEFT, Offset::UP]);
        assert_eq!(c.get(IntraMode::VERTICAL).taps, [Offset::UP, Offset::UP_LEFT, Offset::LEFT]);
        let m2 = c.get(IntraMode::new(2).unwrap());
        let m34 = c.get(IntraMode::new(34).unwrap());
        assert_eq!(m2.scan, ScanOrder::ColumnMajor);
        assert_eq!(m34.scan, ScanOrder::Raster);
        assert_eq!(m34.taps[1], Offset::UP_RIGHT);
    }

    #[test]
    fn groups_share_patterns() {
        let c = NeighborConfig::shipped();
        let pattern = |m: u8| c.get(IntraMode::new(m).unwrap());
        for (range, rep) in [(2..=9, 2), (10..=18, 0), (19..=26, 19), (27..=34, 27)] {
            for m in range {
                assert_eq!(pattern(m), pattern(rep));
            }
        }
        assert_eq!(pattern(1), pattern(0));
    }

    #[test]
    fn rejects_non_causal_and_asymmetric() {
        let mut modes = *NeighborConfig::shipped().modes();
        modes[10].taps[2] = Offset::new(1, 0);
        assert_eq!(
            NeighborConfig::new(modes).unwrap_err(),
            NeighborError::NotCausal { mode: 10, tap: 2 }
        );
        let mut modes = *NeighborConfig::shipped().modes();
        modes[11].taps = [Offset::LEFT, Offset::UP, Offset::UP_LEFT];
        assert_eq!(NeighborConfig::new(modes).unwrap_err(), NeighborError::Asymmetric { mode: 11 });
    }

    #[test]
    fn causality_rules() {
        assert!(ScanOrder::Raster.is_causal(1, -1));
        assert!(!ScanOrder::Raster.is_causal(-1, 1));
        assert!(ScanOrder::ColumnMajor.is_causal(-1, 1));
        assert!(!ScanOrder::ColumnMajor.is_causal(1, -1));
        assert!(!ScanOrder::Raster.is_causal(0, 0));
    }
}
