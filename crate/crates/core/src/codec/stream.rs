//! Stream header and the optional embedded 3-tap tables.
//!
//! ```text
//! "ILC1" u8 version  u16 width  u16 height  u8 bit_depth  u8 family  u8 ctu_log2
//! ```
//!
//! Version 1 streams use the compiled-in 3-tap tables. Version 2 streams
//! (three-tap family only) follow the header with:
//!
//! ```text
//! u8 shift  u8 layout (bit 0 per-mode, bit 1 per-size)
//! slot_count × (i16 ρ1, i16 ρ2, i16 ρ3)
//! 35 × (i8 a.dx, a.dy, b.dx, b.dy, c.dx, c.dy, u8 scan)
//! ```

use alloc::vec::Vec;

use super::{CodecError, PredictorFamily, MAX_BLOCK, MIN_BLOCK};
use crate::entropy::{BitReader, BitWriter};
use crate::prediction::{
    IntraMode, ModeNeighbors, ModePooling, NeighborConfig, Offset, ScanOrder, SlotLayout,
    WeightTable,
};

pub const MAGIC: [u8; 4] = *b"ILC1";
pub const VERSION_SHIPPED_TABLES: u8 = 1;
pub const VERSION_EMBEDDED_TABLES: u8 = 2;
/// Fixed header size.
pub const HEADER_BITS: u64 = 96;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamHeader {
    pub version: u8,
    pub width: u16,
    pub height: u16,
    pub bit_depth: u8,
    pub family: PredictorFamily,
    pub ctu_log2: u8,
}

impl StreamHeader {
    pub fn ctu_size(&self) -> usize {
        1 << self.ctu_log2
    }

    pub(crate) fn write(&self, w: &mut BitWriter) {
        w.write_bytes(&MAGIC);
        w.write_bits(self.version as u32, 8);
        w.write_bits(self.width as u32, 16);
        w.write_bits(self.height as u32, 16);
        w.write_bits(self.bit_depth as u32, 8);
        w.write_bits(self.family.code() as u32, 8);
        w.write_bits(self.ctu_log2 as u32, 8);
    }

    pub(crate) fn read(r: &mut BitReader<'_>) -> Result<Self, CodecError> {
        let mut magic = [0u8; 4];
        for b in &mut magic {
            *b = r.read_u8().map_err(|_| CodecError::BadMagic)?;
        }
        if magic != MAGIC {
            return Err(CodecError::BadMagic);
        }
        let version = r.read_u8()?;
        if version != VERSION_SHIPPED_TABLES && version != VERSION_EMBEDDED_TABLES {
            return Err(CodecError::UnsupportedVersion(version));
        }
        let width = r.read_u16()?;
        let height = r.read_u16()?;
        let bit_depth = r.read_u8()?;
        let family_code = r.read_u8()?;
        let ctu_log2 = r.read_u8()?;
        let family = PredictorFamily::from_code(family_code).ok_or(CodecError::UnsupportedFamily(family_code))?;
        if width == 0 || height == 0 {
            return Err(CodecError::InvalidHeader("zero dimension"));
        }
        if bit_depth != 8 && bit_depth != 10 {
            return Err(CodecError::InvalidHeader("bit depth must be 8 or 10"));
        }
        let ctu_ok = (MIN_BLOCK.trailing_zeros()..=MAX_BLOCK.trailing_zeros()).contains(&(ctu_log2 as u32));
        if !ctu_ok {
            return Err(CodecError::InvalidHeader("ctu size out of range"));
        }
        if version == VERSION_EMBEDDED_TABLES && family != PredictorFamily::ThreeTap {
            return Err(CodecError::InvalidHeader("embedded tables without three-tap family"));
        }
        Ok(StreamHeader {
            version,
            width,
            height,
            bit_depth,
            family,
            ctu_log2,
        })
    }
}

/// Encoded bytes of one plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitstream {
    bytes: Vec<u8>,
}

impl Bitstream {
    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        Bitstream { bytes }
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bytes.is_empty()
    }

    pub fn header(&self) -> Result<StreamHeader, CodecError> {
        StreamHeader::read(&mut BitReader::new(&self.bytes))
    }
}

impl AsRef<[u8]> for Bitstream {
    fn as_ref(&self) -> &[u8] {
        &self.bytes
    }
}

pub(crate) fn write_tables(w: &mut BitWriter, weights: &WeightTable, neighbors: &NeighborConfig) {
    let layout = weights.layout();
    w.write_bits(weights.shift(), 8);
    let flags = (layout.pooling == ModePooling::PerMode) as u32 | ((layout.per_block_size as u32) << 1);
    w.write_bits(flags, 8);
    for t in weights.triples() {
        for &v in t {
            w.write_bits(v as i16 as u16 as u32, 16);
        }
    }
    for m in neighbors.modes() {
        for o in m.taps {
            w.write_bits(o.dx as u8 as u32, 8);
            w.write_bits(o.dy as u8 as u32, 8);
        }
        w.write_bits(matches!(m.scan, ScanOrder::ColumnMajor) as u32, 8);
    }
}

pub(crate) fn read_tables(r: &mut BitReader<'_>) -> Result<(WeightTable, NeighborConfig), CodecError> {
    let shift = r.read_u8()? as u32;
    let flags = r.read_u8()?;
    if flags > 3 {
        return Err(CodecError::Corrupt("unknown weight layout"));
    }
    let layout = SlotLayout {
        pooling: if flags & 1 != 0 {
            ModePooling::PerMode
        } else {
            ModePooling::Symmetric
        },
        per_block_size: flags & 2 != 0,
    };
    let mut triples = Vec::with_capacity(layout.slot_count());
    for _ in 0..layout.slot_count() {
        let mut t = [0i32; 3];
        for v in &mut t {
            *v = r.read_u16()? as i16 as i32;
        }
        triples.push(t);
    }
    let weights = WeightTable::new(shift, layout, triples).map_err(CodecError::Weights)?;
    let mut modes = [ModeNeighbors {
        taps: [Offset::LEFT, Offset::UP_LEFT, Offset::UP],
        scan: ScanOrder::Raster,
    }; IntraMode::COUNT];
    for m in &mut modes {
        for tap in &mut m.taps {
            let dx = r.read_u8()? as i8;
            let dy = r.read_u8()? as i8;
            *tap = Offset::new(dx, dy);
        }
        m.scan = match r.read_u8()? {
            0 => ScanOrder::Raster,
            1 => ScanOrder::ColumnMajor,
            _ => return Err(CodecError::Corrupt("unknown scan order")),
        };
    }
    let neighbors = NeighborConfig::new(modes).map_err(CodecError::Neighbors)?;
    Ok((weights, neighbors))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header() -> StreamHeader {
        StreamHeader {
            version: 1,
            width: 640,
            height: 480,
            bit_depth: 8,
            family: PredictorFamily::ThreeTap,
            ctu_log2: 5,
        }
    }

    #[test]
    fn header_layout_is_bit_exact() {
        let mut w = BitWriter::new();
        header().write(&mut w);
        assert_eq!(w.bit_len(), HEADER_BITS);
        let bytes = w.finish();
        assert_eq!(bytes, [b'I', b'L', b'C', b'1', 1, 0x02, 0x80, 0x01, 0xE0, 8, 2, 5]);
        assert_eq!(StreamHeader::read(&mut BitReader::new(&bytes)), Ok(header()));
    }

    #[test]
    fn header_rejections() {
        let mut w = BitWriter::new();
        header().write(&mut w);
        let good = w.finish();
        let check = |i: usize, v: u8| {
            let mut b = good.clone();
            b[i] = v;
            StreamHeader::read(&mut BitReader::new(&b))
        };
        assert_eq!(check(0, b'X'), Err(CodecError::BadMagic));
        assert_eq!(check(4, 9), Err(CodecError::UnsupportedVersion(9)));
        assert_eq!(check(10, 7), Err(CodecError::UnsupportedFamily(7)));
        assert!(matches!(check(9, 12), Err(CodecError::InvalidHeader(_))));
        assert!(matches!(check(11, 6), Err(CodecError::InvalidHeader(_))));
        assert_eq!(
            StreamHeader::read(&mut BitReader::new(&good[..7])),
            Err(CodecError::Truncated)
        );
        assert_eq!(StreamHeader::read(&mut BitReader::new(b"IL")), Err(CodecError::BadMagic));
    }

    #[test]
    fn tables_round_trip() {
        let layout = SlotLayout {
            pooling: ModePooling::PerMode,
            per_block_size: true,
        };
        let weights = WeightTable::shipped().expanded(layout, 10).unwrap();
        let neighbors = NeighborConfig::shipped();
        let mut w = BitWriter::new();
        write_tables(&mut w, &weights, &neighbors);
        let bytes = w.finish();
        assert_eq!(bytes.len(), 2 + 140 * 6 + 35 * 7);
        let (w2, n2) = read_tables(&mut BitReader::new(&bytes)).unwrap();
        assert_eq!(w2, weights);
        assert_eq!(n2, neighbors);
    }
}
