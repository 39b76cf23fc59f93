//! Pixel-by-pixel predictors: sample-based angular and 3-tap.
//!
//! Both read neighbours through [`CausalSamples`]. A missing neighbour takes
//! the value of the nearest available neighbour among the predictor's own
//! taps (ties go to the earlier tap). With none available the pixel's left,
//! above or above-left neighbour stands in, then mid-gray.

use super::block::interpolate;
use super::mode::IntraMode;
use super::neighbors::{NeighborConfig, Offset, ScanOrder};
use super::reference::CausalSamples;
use super::weights::WeightTable;

/// Scan order required by sample-based angular prediction: the horizontal
/// family reads the column to the left, so columns are reconstructed first.
pub fn sap_scan(mode: IntraMode) -> ScanOrder {
    if mode.is_angular() && !mode.is_vertical_family() {
        ScanOrder::ColumnMajor
    } else {
        ScanOrder::Raster
    }
}

fn fill_missing<const N: usize>(
    values: [Option<u16>; N],
    offsets: [Offset; N],
    mid: u16,
) -> [u16; N] {
    core::array::from_fn(|i| {
        if let Some(v) = values[i] {
            return v;
        }
        let mut best: Option<(i32, u16)> = None;
        for j in 0..N {
            if let Some(v) = values[j] {
                let dx = (offsets[i].dx - offsets[j].dx) as i32;
                let dy = (offsets[i].dy - offsets[j].dy) as i32;
                let d = dx * dx + dy * dy;
                if best.is_none_or(|(bd, _)| d < bd) {
                    best = Some((d, v));
                }
            }
        }
        best.map_or(mid, |(_, v)| v)
    })
}

/// Value used when none of a predictor's taps is available.
fn fallback_value<S: CausalSamples + ?Sized>(recon: &S, x: isize, y: isize) -> u16 {
    [(-1, 0), (0, -1), (-1, -1)]
        .iter()
        .find_map(|&(dx, dy)| recon.sample(x + dx, y + dy))
        .unwrap_or(recon.mid_value())
}

/// Sample-based angular prediction of the pixel at `(x, y)`, modes 2..=34.
///
/// The pixel is projected one row up (vertical family) or one column left
/// (horizontal family) along the mode's displacement and interpolated between
/// the two nearest samples of that row or column.
pub fn predict_pixel_sap<S: CausalSamples + ?Sized>(
    recon: &S,
    x: usize,
    y: usize,
    mode: IntraMode,
) -> u16 {
    let angle = mode.displacement().expect("sample-based prediction needs an angular mode");
    let idx = (angle >> 5) as i8;
    let fact = angle & 31;
    let (o_a, o_b) = if mode.is_vertical_family() {
        (Offset::new(idx, -1), Offset::new(idx + 1, -1))
    } else {
        (Offset::new(-1, idx), Offset::new(-1, idx + 1))
    };
    let (xi, yi) = (x as isize, y as isize);
    let fetch = |o: Offset| recon.sample(xi + o.dx as isize, yi + o.dy as isize);
    if fact == 0 {
        return fetch(o_a).unwrap_or_else(|| fallback_value(recon, xi, yi));
    }
    let values = [fetch(o_a), fetch(o_b)];
    if values.iter().all(Option::is_none) {
        return fallback_value(recon, xi, yi);
    }
    let [a, b] = fill_missing(values, [o_a, o_b], recon.mid_value());
    interpolate(a, b, fact)
}

/// Values of the three taps of `mode` at `(x, y)` after substitution.
pub fn gather_3tap<S: CausalSamples + ?Sized>(
    recon: &S,
    x: usize,
    y: usize,
    mode: IntraMode,
    config: &NeighborConfig,
) -> [u16; 3] {
    let taps = config.get(mode).taps;
    let (xi, yi) = (x as isize, y as isize);
    let values = taps.map(|o| recon.sample(xi + o.dx as isize, yi + o.dy as isize));
    if values.iter().all(Option::is_none) {
        return [fallback_value(recon, xi, yi); 3];
    }
    fill_missing(values, taps, recon.mid_value())
}

/// Fixed-point weighted sum `clip((ρ1·a + ρ2·b + ρ3·c + half) >> shift)`.
#[inline]
pub fn apply_3tap(taps: [u16; 3], weights: [i32; 3], shift: u32, max: u16) -> u16 {
    let sum = weights[0] * taps[0] as i32 + weights[1] * taps[1] as i32 + weights[2] * taps[2] as i32;
    ((sum + (1 << (shift - 1))) >> shift).clamp(0, max as i32) as u16
}

/// 3-tap prediction of the pixel at `(x, y)` inside a block of `block_size`.
pub fn predict_pixel_3tap<S: CausalSamples + ?Sized>(
    recon: &S,
    x: usize,
    y: usize,
    mode: IntraMode,
    block_size: usize,
    weights: &WeightTable,
    config: &NeighborConfig,
) -> u16 {
    let taps = gather_3tap(recon, x, y, mode, config);
    apply_3tap(taps, weights.triple(mode, block_size), weights.shift(), recon.max_value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::Plane;
    use crate::prediction::reference::InBounds;

    fn m(i: u8) -> IntraMode {
        IntraMode::new(i).unwrap()
    }

    #[test]
    fn three_tap_examples() {
        assert_eq!(apply_3tap([100, 100, 100], [22, -11, 21], 5, 255), 100);
        // (1500 - 1000 + 1620 + 16) >> 5
        assert_eq!(apply_3tap([50, 40, 60], [30, -25, 27], 5, 255), 66);
        assert_eq!(apply_3tap([0, 255, 0], [30, -25, 27], 5, 255), 0);
        assert_eq!(apply_3tap([255, 0, 255], [30, -25, 27], 5, 255), 255);
    }

    #[test]
    fn three_tap_constant_is_fixed_point() {
        let p = Plane::filled(6, 6, 8, 93).unwrap();
        let w = WeightTable::shipped();
        let c = NeighborConfig::shipped();
        for mode in IntraMode::all() {
            for y in 0..6 {
                for x in 0..6 {
                    if x == 0 && y == 0 {
                        continue;
                    }
                    assert_eq!(predict_pixel_3tap(&InBounds(&p), x, y, mode, 4, &w, &c), 93);
                }
            }
        }
    }

    #[test]
    fn substitution_prefers_nearest_tap() {
        let p = Plane::from_fn(4, 4, 8, |x, y| (10 * x + 60 * y) as u16).unwrap();
        let c = NeighborConfig::shipped();
        // Top row, mode 10: left available, upper-left and upper missing.
        assert_eq!(gather_3tap(&InBounds(&p), 2, 0, m(10), &c), [10, 10, 10]);
        // Left column, mode 10: only upper available.
        assert_eq!(gather_3tap(&InBounds(&p), 0, 2, m(10), &c), [60, 60, 60]);
        // Origin: nothing at all.
        assert_eq!(gather_3tap(&InBounds(&p), 0, 0, m(10), &c), [128, 128, 128]);
        // Right column, mode 34: upper-right missing; upper (distance 1) wins
        // over left (distance sqrt 5).
        assert_eq!(gather_3tap(&InBounds(&p), 3, 2, m(34), &c), [90, 90, 140]);
    }

    #[test]
    fn sap_copies_for_pure_directions() {
        let p = Plane::from_fn(5, 5, 8, |x, y| (x * 7 + y * 31) as u16).unwrap();
        let v = InBounds(&p);
        assert_eq!(predict_pixel_sap(&v, 2, 3, IntraMode::VERTICAL), p.get(2, 2));
        assert_eq!(predict_pixel_sap(&v, 2, 3, IntraMode::HORIZONTAL), p.get(1, 3));
        assert_eq!(predict_pixel_sap(&v, 2, 3, m(34)), p.get(3, 2));
        assert_eq!(predict_pixel_sap(&v, 2, 3, m(2)), p.get(1, 4));
        assert_eq!(predict_pixel_sap(&v, 2, 3, m(18)), p.get(1, 2));
    }

    #[test]
    fn sap_mode30_matches_projection_oracle() {
        let p = Plane::from_fn(8, 8, 8, |x, y| ((x * 37 + y * 11 + x * y) % 256) as u16).unwrap();
        // Mode 30 has displacement +13: the pixel lands 13/32 of a sample to the
        // right of the pixel directly above.
        for (x, y) in [(3usize, 4usize), (1, 1), (5, 6)] {
            let a = p.get(x, y - 1) as f64;
            let b = p.get(x + 1, y - 1) as f64;
            let want = (a * 19.0 / 32.0 + b * 13.0 / 32.0 + 0.5).floor() as u16;
            assert_eq!(predict_pixel_sap(&InBounds(&p), x, y, m(30)), want);
        }
    }

    #[test]
    fn sap_scan_orders() {
        assert_eq!(sap_scan(m(2)), ScanOrder::ColumnMajor);
        assert_eq!(sap_scan(m(17)), ScanOrder::ColumnMajor);
        assert_eq!(sap_scan(m(18)), ScanOrder::Raster);
        assert_eq!(sap_scan(m(0)), ScanOrder::Raster);
    }
}
