//! Block-based prediction from a [`ReferenceArray`].
//!
//! No reference smoothing and no DC or horizontal/vertical edge filters are
//! applied; the angular interpolation `((32 - w)·a + w·b + 16) >> 5` is the only
//! angular formula.

use alloc::vec::Vec;

use super::mode::IntraMode;
use super::reference::ReferenceArray;

/// Two-tap interpolation at 1/32 precision.
#[inline(always)]
pub fn interpolate(a: u16, b: u16, w: i32) -> u16 {
    debug_assert!((0..=32).contains(&w));
    (((32 - w) * a as i32 + w * b as i32 + 16) >> 5) as u16
}

#[inline]
fn log2(n: usize) -> u32 {
    debug_assert!(n.is_power_of_two());
    n.trailing_zeros()
}

/// Predicts an N×N block (row-major) with any of the 35 modes.
pub fn predict_block(refs: &ReferenceArray, mode: IntraMode) -> Vec<u16> {
    match mode.index() {
        0 => predict_block_planar(refs),
        1 => predict_block_dc(refs),
        _ => predict_block_angular(refs, mode),
    }
}

pub fn predict_block_dc(refs: &ReferenceArray) -> Vec<u16> {
    let n = refs.size();
    let sum: u32 = refs.top()[..n]
        .iter()
        .chain(&refs.left()[..n])
        .map(|&v| v as u32)
        .sum();
    let dc = ((sum + n as u32) >> (log2(n) + 1)) as u16;
    alloc::vec![dc; n * n]
}

pub fn predict_block_planar(refs: &ReferenceArray) -> Vec<u16> {
    let n = refs.size();
    let shift = log2(n) + 1;
    let top = refs.top();
    let left = refs.left();
    let top_right = top[n] as u32;
    let bottom_left = left[n] as u32;
    let n32 = n as u32;
    let mut out = Vec::with_capacity(n * n);
    for y in 0..n32 {
        for x in 0..n32 {
            let h = (n32 - 1 - x) * left[y as usize] as u32 + (x + 1) * top_right;
            let v = (n32 - 1 - y) * top[x as usize] as u32 + (y + 1) * bottom_left;
            out.push(((h + v + n32) >> shift) as u16);
        }
    }
    out
}

/// Angular prediction for modes 2..=34.
///
/// Negative displacements extend the main reference with side samples
/// projected through the mode's inverse displacement.
pub fn predict_block_angular(refs: &ReferenceArray, mode: IntraMode) -> Vec<u16> {
    let angle = mode.displacement().expect("angular mode");
    let inv = mode.inverse_displacement();
    let n = refs.size();
    if mode.is_vertical_family() {
        angular_from_main(refs.above(), refs.left(), n, angle, inv)
    } else {
        let mut main = Vec::with_capacity(2 * n + 1);
        main.push(refs.corner());
        main.extend_from_slice(refs.left());
        let t = angular_from_main(&main, refs.top(), n, angle, inv);
        let mut out = alloc::vec![0; n * n];
        for y in 0..n {
            for x in 0..n {
                out[y * n + x] = t[x * n + y];
            }
        }
        out
    }
}

/// Vertical-orientation kernel. `main` is corner + 2N samples along the
/// projection side, `side` the 2N samples of the perpendicular side.
fn angular_from_main(main: &[u16], side: &[u16], n: usize, angle: i32, inv: Option<i32>) -> Vec<u16> {
    let ni = n as i32;
    // buf[n + k] holds ref[k] for k in -n..=2n.
    let mut buf = alloc::vec![0u16; 3 * n + 1];
    buf[n..].copy_from_slice(&main[..2 * n + 1]);
    if angle < 0 {
        let last = (ni * angle) >> 5;
        if last < -1 {
            let inv = inv.expect("negative angle has an inverse");
            for k in last..=-1 {
                let j = -1 + ((k * inv + 128) >> 8);
                buf[(ni + k) as usize] = if j < 0 { main[0] } else { side[j as usize] };
            }
        }
    }
    let mut out = Vec::with_capacity(n * n);
    for y in 0..ni {
        let pos = (y + 1) * angle;
        let idx = pos >> 5;
        let fact = pos & 31;
        for x in 0..ni {
            let i = (ni + x + idx + 1) as usize;
            out.push(if fact == 0 {
                buf[i]
            } else {
                interpolate(buf[i], buf[i + 1], fact)
            });
        }
    }
    out
}
