use alloc::vec::Vec;

use crate::prediction::{SlotLayout, WeightError, WeightTable};

/// Real-valued weights, one triple per slot of `layout`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealTable {
    pub layout: SlotLayout,
    pub triples: Vec<[f64; 3]>,
}

impl RealTable {
    /// Integer table spread over `layout` and divided by its unit.
    pub fn from_table(table: &WeightTable, layout: SlotLayout) -> Result<Self, WeightError> {
        let expanded = table.expanded(layout, table.shift())?;
        let unit = expanded.unit() as f64;
        Ok(RealTable {
            layout,
            triples: expanded.triples().iter().map(|t| t.map(|v| v as f64 / unit)).collect(),
        })
    }

    /// Largest absolute per-weight change.
    pub fn max_abs_delta(&self, other: &RealTable) -> f64 {
        self.triples
            .iter()
            .zip(&other.triples)
            .flat_map(|(a, b)| (0..3).map(move |i| a[i] - b[i]))
            .map(|d| if d < 0.0 { -d } else { d })
            .fold(0.0, f64::max)
    }
}

#[inline]
fn round_half_away(x: f64) -> i64 {
    if x >= 0.0 {
        (x + 0.5) as i64
    } else {
        -((-x + 0.5) as i64)
    }
}

/// Rounds `ρ · 2^shift` and restores the exact sum `2^shift` by moving the
/// component whose rounding error points furthest in the needed direction
/// (ties go to the later component).
pub fn quantize_triple(real: [f64; 3], shift: u32) -> [i32; 3] {
    let unit = (1i64 << shift) as f64;
    let scaled = real.map(|r| r * unit);
    let mut q = scaled.map(round_half_away);
    let target = 1i64 << shift;
    loop {
        let diff = target - (q[0] + q[1] + q[2]);
        if diff == 0 {
            break;
        }
        let step = diff.signum();
        // Error in the needed direction: how far the component was rounded
        // against `step`.
        let err = |i: usize| (scaled[i] - q[i] as f64) * step as f64;
        let mut pick = 0;
        for i in 1..3 {
            if err(i) >= err(pick) {
                pick = i;
            }
        }
        q[pick] += step;
    }
    q.map(|v| v as i32)
}

/// Quantizes every slot. Slots whose rounded weights break the table bounds
/// keep the corresponding triple of `fallback`.
pub fn quantize_weights(real: &RealTable, shift: u32, fallback: &WeightTable) -> Result<WeightTable, WeightError> {
    let fallback = fallback.expanded(real.layout, shift)?;
    let mut table = fallback.clone();
    for (slot, &r) in real.triples.iter().enumerate() {
        if let Ok(t) = table.with_slot(slot, quantize_triple(r, shift)) {
            table = t;
        }
    }
    Ok(table)
}
