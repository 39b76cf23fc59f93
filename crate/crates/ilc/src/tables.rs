//! Plain-text weight and neighbour tables.
//!
//! Weights:
//!
//! ```text
//! shift 5
//! layout symmetric shared
//! # mode size rho1 rho2 rho3
//! 0 * 22 -11 21
//! ```
//!
//! One row per slot in slot order. `mode` is the lowest mode of the slot;
//! `size` is `*` for shared tables, else 4, 8, 16 or 32.
//!
//! Neighbours, one row per mode:
//!
//! ```text
//! # mode a b c scan
//! 10 -1,0 -1,-1 0,-1 raster
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ilc_core::prediction::{
    ModeNeighbors, ModePooling, NeighborConfig, Offset, ScanOrder, SlotLayout, WeightTable, SIZE_CLASSES,
};
use ilc_core::IntraMode;

use crate::error::{IlcError, Result};

fn rows(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, f)| !f.is_empty())
}

fn bad(line: usize, msg: impl std::fmt::Display) -> IlcError {
    IlcError::Table(format!("line {line}: {msg}"))
}

fn parse<T: std::str::FromStr>(line: usize, s: &str, what: &str) -> Result<T> {
    s.parse().map_err(|_| bad(line, format_args!("invalid {what} {s:?}")))
}

pub fn format_weights(table: &WeightTable) -> String {
    let layout = table.layout();
    let mut out = format!(
        "shift {}\nlayout {} {}\n# mode size rho1 rho2 rho3\n",
        table.shift(),
        match layout.pooling {
            ModePooling::Symmetric => "symmetric",
            ModePooling::PerMode => "per-mode",
        },
        if layout.per_block_size { "per-size" } else { "shared" }
    );
    for (slot, t) in table.triples().iter().enumerate() {
        let mode = layout.slot_mode(slot).index();
        let size = if layout.per_block_size {
            (4usize << (slot % SIZE_CLASSES)).to_string()
        } else {
            "*".to_string()
        };
        writeln!(out, "{mode} {size} {} {} {}", t[0], t[1], t[2]).unwrap();
    }
    out
}

pub fn parse_weights(text: &str) -> Result<WeightTable> {
    let mut shift = WeightTable::SHIPPED_SHIFT;
    let mut layout = SlotLayout::SHIPPED;
    let mut triples = Vec::new();
    for (line, f) in rows(text) {
        match f[0] {
            "shift" if f.len() == 2 => shift = parse(line, f[1], "shift")?,
            "layout" if f.len() == 3 => {
                layout.pooling = match f[1] {
                    "symmetric" => ModePooling::Symmetric,
                    "per-mode" => ModePooling::PerMode,
                    other => return Err(bad(line, format_args!("unknown pooling {other:?}"))),
                };
                layout.per_block_size = match f[2] {
                    "shared" => false,
                    "per-size" => true,
                    other => return Err(bad(line, format_args!("unknown size layout {other:?}"))),
                };
            }
            _ if f.len() == 5 => {
                let slot = triples.len();
                if slot >= layout.slot_count() {
                    return Err(bad(line, "more rows than slots"));
                }
                let mode: u8 = parse(line, f[0], "mode")?;
                if mode != layout.slot_mode(slot).index() {
                    return Err(bad(line, format_args!("slot {slot} belongs to mode {}", layout.slot_mode(slot).index())));
                }
                let want_size = if layout.per_block_size {
                    (4usize << (slot % SIZE_CLASSES)).to_string()
                } else {
                    "*".into()
                };
                if f[1] != want_size {
                    return Err(bad(line, format_args!("expected size {want_size}")));
                }
                triples.push([parse(line, f[2], "weight")?, parse(line, f[3], "weight")?, parse(line, f[4], "weight")?]);
            }
            _ => return Err(bad(line, "expected `shift`, `layout` or `mode size rho1 rho2 rho3`")),
        }
    }
    WeightTable::new(shift, layout, triples).map_err(|e| IlcError::Table(e.to_string()))
}

fn format_offset(o: Offset) -> String {
    format!("{},{}", o.dx, o.dy)
}

pub fn format_neighbors(config: &NeighborConfig) -> String {
    let mut out = String::from("# mode a b c scan\n");
    for mode in IntraMode::all() {
        let m = config.get(mode);
        let scan = match m.scan {
            ScanOrder::Raster => "raster",
            ScanOrder::ColumnMajor => "column",
        };
        let [a, b, c] = m.taps.map(format_offset);
        writeln!(out, "{} {a} {b} {c} {scan}", mode.index()).unwrap();
    }
    out
}

pub fn parse_neighbors(text: &str) -> Result<NeighborConfig> {
    let mut modes: [Option<ModeNeighbors>; IntraMode::COUNT] = [None; IntraMode::COUNT];
    for (line, f) in rows(text) {
        if f.len() != 5 {
            return Err(bad(line, "expected `mode a b c scan`"));
        }
        let mode: usize = parse(line, f[0], "mode")?;
        if mode >= IntraMode::COUNT {
            return Err(bad(line, format_args!("mode {mode} out of range")));
        }
        if modes[mode].is_some() {
            return Err(bad(line, format_args!("mode {mode} listed twice")));
        }
        let mut taps = [Offset::LEFT; 3];
        for (tap, s) in taps.iter_mut().zip(&f[1..4]) {
            let (dx, dy) = s.split_once(',').ok_or_else(|| bad(line, format_args!("offset {s:?} is not dx,dy")))?;
            *tap = Offset::new(parse(line, dx, "offset")?, parse(line, dy, "offset")?);
        }
        let scan = match f[4] {
            "raster" => ScanOrder::Raster,
            "column" | "column-major" => ScanOrder::ColumnMajor,
            other => return Err(bad(line, format_args!("unknown scan {other:?}"))),
        };
        modes[mode] = Some(ModeNeighbors { taps, scan });
    }
    if let Some(missing) = modes.iter().position(Option::is_none) {
        return Err(IlcError::Table(format!("mode {missing} has no neighbour row")));
    }
    NeighborConfig::new(modes.map(Option::unwrap)).map_err(|e| IlcError::Table(e.to_string()))
}

pub fn load_weights(path: impl AsRef<Path>) -> Result<WeightTable> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| IlcError::io(path, e))?;
    parse_weights(&text).map_err(|e| IlcError::Table(format!("{}: {e}", path.display())))
}

pub fn load_neighbors(path: impl AsRef<Path>) -> Result<NeighborConfig> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| IlcError::io(path, e))?;
    parse_neighbors(&text).map_err(|e| IlcError::Table(format!("{}: {e}", path.display())))
}

pub fn save_weights(table: &WeightTable, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_weights(table)).map_err(|e| IlcError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_tables_round_trip() {
        let w = WeightTable::shipped();
        let text = format_weights(&w);
        assert!(text.contains("\n0 * 22 -11 21\n"));
        assert_eq!(parse_weights(&text).unwrap(), w);
        let n = NeighborConfig::shipped();
        assert_eq!(parse_neighbors(&format_neighbors(&n)).unwrap(), n);
    }

    #[test]
    fn per_size_tables_round_trip() {
        let layout = SlotLayout { pooling: ModePooling::PerMode, per_block_size: true };
        let w = WeightTable::shipped().expanded(layout, 10).unwrap();
        assert_eq!(parse_weights(&format_weights(&w)).unwrap(), w);
    }

    #[test]
    fn rejects_broken_tables() {
        let text = format_weights(&WeightTable::shipped()).replace("0 * 22 -11 21", "0 * 22 -11 20");
        assert!(parse_weights(&text).unwrap_err().to_string().contains("sum"));
        let short: String = format_weights(&WeightTable::shipped()).lines().take(10).collect::<Vec<_>>().join("\n");
        assert!(parse_weights(&short).is_err());
        let n = format_neighbors(&NeighborConfig::shipped()).replace("10 -1,0", "10 1,0");
        assert!(parse_neighbors(&n).is_err());
        assert!(parse_neighbors("0 -1,0 -1,-1 0,-1 raster").unwrap_err().to_string().contains("mode 1"));
    }
}
