use core::fmt;

/// One of the 35 intra modes: 0 planar, 1 DC, 2..=34 angular.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntraMode(u8);

impl IntraMode {
    pub const COUNT: usize = 35;
    pub const PLANAR: IntraMode = IntraMode(0);
    pub const DC: IntraMode = IntraMode(1);
    pub const HORIZONTAL: IntraMode = IntraMode(10);
    pub const DIAGONAL: IntraMode = IntraMode(18);
    pub const VERTICAL: IntraMode = IntraMode(26);

    pub const fn new(index: u8) -> Option<IntraMode> {
        if (index as usize) < Self::COUNT {
            Some(IntraMode(index))
        } else {
            None
        }
    }

    #[inline]
    pub const fn index(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = IntraMode> + Clone {
        (0..Self::COUNT as u8).map(IntraMode)
    }

    pub fn angular() -> impl Iterator<Item = IntraMode> + Clone {
        (2..Self::COUNT as u8).map(IntraMode)
    }

    #[inline]
    pub const fn is_angular(self) -> bool {
        self.0 >= 2
    }

    /// Angular modes 18..=34 project onto the row above; 2..=17 onto the
    /// left column.
    #[inline]
    pub const fn is_vertical_family(self) -> bool {
        self.0 >= 18
    }

    /// Mirror mode `36 - k` for angular modes other than 18.
    pub const fn symmetric_partner(self) -> Option<IntraMode> {
        match self.0 {
            2..=17 | 19..=34 => Some(IntraMode(36 - self.0)),
            _ => None,
        }
    }

    /// Index of the weight slot shared by this mode and its partner.
    #[inline]
    pub const fn canonical_slot(self) -> usize {
        if self.0 <= 18 {
            self.0 as usize
        } else {
            36 - self.0 as usize
        }
    }

    pub const fn group(self) -> ModeGroup {
        match self.0 {
            2..=9 => ModeGroup::BelowLeft,
            0 | 1 | 10..=18 => ModeGroup::Horizontal,
            19..=26 => ModeGroup::Vertical,
            _ => ModeGroup::AboveRight,
        }
    }

    /// Displacement in 1/32 sample units per row (vertical family) or column
    /// (horizontal family). `None` for planar and DC.
    #[inline]
    pub fn displacement(self) -> Option<i32> {
        self.is_angular()
            .then(|| ANGLE_DISPLACEMENT[self.0 as usize - 2])
    }

    /// Fixed-point reciprocal `round(8192 / displacement)` used to project
    /// side references for negative displacements.
    pub fn inverse_displacement(self) -> Option<i32> {
        let d = self.displacement()?;
        if d >= 0 {
            return None;
        }
        Some(match -d {
            2 => -4096,
            5 => -1638,
            9 => -910,
            13 => -630,
            17 => -482,
            21 => -390,
            26 => -315,
            32 => -256,
            _ => unreachable!(),
        })
    }
}

impl fmt::Debug for IntraMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntraMode({})", self.0)
    }
}

impl fmt::Display for IntraMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Angular displacement per mode 2..=34.
pub const ANGLE_DISPLACEMENT: [i32; 33] = [
    32, 26, 21, 17, 13, 9, 5, 2, 0, -2, -5, -9, -13, -17, -21, -26, //
    -32, //
    -26, -21, -17, -13, -9, -5, -2, 0, 2, 5, 9, 13, 17, 21, 26, 32,
];

/// The four neighbourhood groups of the 3-tap predictor. Also used to pick
/// entropy contexts for every family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeGroup {
    /// Modes 2..=9.
    BelowLeft,
    /// Modes 0, 1 and 10..=18.
    Horizontal,
    /// Modes 19..=26.
    Vertical,
    /// Modes 27..=34.
    AboveRight,
}

impl ModeGroup {
    pub const fn index(self) -> usize {
        match self {
            ModeGroup::BelowLeft => 0,
            ModeGroup::Horizontal => 1,
            ModeGroup::Vertical => 2,
            ModeGroup::AboveRight => 3,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(i: u8) -> IntraMode {
        IntraMode::new(i).unwrap()
    }

    #[test]
    fn partner_examples() {
        assert_eq!(m(17).symmetric_partner(), Some(m(19)));
        assert_eq!(m(18).symmetric_partner(), None);
        assert_eq!(m(2).symmetric_partner(), Some(m(34)));
        assert_eq!(m(0).symmetric_partner(), None);
        assert_eq!(m(1).symmetric_partner(), None);
    }

    #[test]
    fn partner_is_involution_and_shares_slot() {
        for mode in IntraMode::all() {
            if let Some(p) = mode.symmetric_partner() {
                assert_eq!(p.symmetric_partner(), Some(mode));
                assert_eq!(p.canonical_slot(), mode.canonical_slot());
                assert_ne!(p.is_vertical_family(), mode.is_vertical_family());
            }
        }
        let slots: alloc::collections::BTreeSet<_> =
            IntraMode::all().map(IntraMode::canonical_slot).collect();
        assert_eq!(slots.len(), 19);
    }

    #[test]
    fn angle_table_invariants() {
        assert_eq!(m(10).displacement(), Some(0));
        assert_eq!(m(26).displacement(), Some(0));
        assert_eq!(m(2).displacement(), Some(32));
        assert_eq!(m(34).displacement(), Some(32));
        assert_eq!(m(18).displacement(), Some(-32));
        for k in 2..=17 {
            assert_eq!(m(k).displacement(), m(36 - k).displacement());
        }
        assert_eq!(m(0).displacement(), None);
    }

    #[test]
    fn inverse_displacement_approximates_reciprocal() {
        for mode in IntraMode::angular() {
            let d = mode.displacement().unwrap();
            match mode.inverse_displacement() {
                Some(inv) => {
                    assert!(d < 0);
                    let exact = 8192.0 / d as f64;
                    let err = inv as f64 - exact;
                    assert!(err > -1.0 && err < 1.0, "mode {mode}: {inv} vs {exact}");
                }
                None => assert!(d >= 0),
            }
        }
    }

    #[test]
    fn groups_follow_mode_ranges() {
        assert_eq!(m(5).group(), ModeGroup::BelowLeft);
        assert_eq!(m(0).group(), ModeGroup::Horizontal);
        assert_eq!(m(18).group(), ModeGroup::Horizontal);
        assert_eq!(m(19).group(), ModeGroup::Vertical);
        assert_eq!(m(26).group(), ModeGroup::Vertical);
        assert_eq!(m(27).group(), ModeGroup::AboveRight);
    }
}
