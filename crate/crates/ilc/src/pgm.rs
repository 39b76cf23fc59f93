//! Binary greymap (P5) files.

use std::fs;
use std::path::Path;

use ilc_core::Plane;

use crate::error::{IlcError, Result};

struct Header<'a> {
    data: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_space(&mut self) {
        while let Some(&c) = self.data.get(self.pos) {
            if c == b'#' {
                while self.data.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u32> {
        self.skip_space();
        let start = self.pos;
        while self.data.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| IlcError::Format(format!("malformed PGM header: bad {what}")))
    }
}

/// Parses a P5 file held in memory. Maxval up to 255 gives an 8-bit
/// plane, up to 1023 a 10-bit plane with big-endian 2-byte samples.
pub fn parse_pgm(data: &[u8]) -> Result<Plane> {
    match data.get(..2) {
        Some(b"P5") => {}
        Some([b'P', _]) => {
            return Err(IlcError::Format(format!(
                "unsupported format {:?}: only binary greymaps (P5) are read",
                String::from_utf8_lossy(&data[..2])
            )))
        }
        _ => return Err(IlcError::Format("not a PGM file".into())),
    }
    let mut h = Header { data, pos: 2 };
    let width = h.number("width")? as usize;
    let height = h.number("height")? as usize;
    let maxval = h.number("maxval")?;
    let bit_depth = match maxval {
        1..=255 => 8,
        256..=1023 => 10,
        _ => return Err(IlcError::Format(format!("unsupported maxval {maxval}"))),
    };
    if !data.get(h.pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(IlcError::Format("malformed PGM header: missing separator".into()));
    }
    let raster = &data[h.pos + 1..];
    let bytes = if bit_depth == 8 { 1 } else { 2 };
    let count = width
        .checked_mul(height)
        .ok_or_else(|| IlcError::Format("PGM dimensions overflow".into()))?;
    if raster.len() < count * bytes {
        return Err(IlcError::Format(format!(
            "truncated PGM payload: {} of {} bytes",
            raster.len(),
            count * bytes
        )));
    }
    let samples: Vec<u16> = if bytes == 1 {
        raster[..count].iter().map(|&b| b as u16).collect()
    } else {
        raster[..count * 2].chunks_exact(2).map(|c| u16::from_be_bytes([c[0], c[1]])).collect()
    };
    if let Some(s) = samples.iter().find(|&&s| s as u32 > maxval) {
        return Err(IlcError::Format(format!("sample {s} exceeds maxval {maxval}")));
    }
    Ok(Plane::new(width, height, bit_depth, samples)?)
}

pub fn load_pgm(path: impl AsRef<Path>) -> Result<Plane> {
    let path = path.as_ref();
    let data = fs::read(path).map_err(|e| IlcError::io(path, e))?;
    parse_pgm(&data).map_err(|e| match e {
        IlcError::Format(msg) => IlcError::Format(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Serializes with maxval 255 or 1023.
pub fn encode_pgm(plane: &Plane) -> Vec<u8> {
    let maxval = plane.max_value();
    let mut out = format!("P5\n{} {}\n{}\n", plane.width(), plane.height(), maxval).into_bytes();
    if plane.bit_depth() == 8 {
        out.extend(plane.samples().iter().map(|&s| s as u8));
    } else {
        out.extend(plane.samples().iter().flat_map(|s| s.to_be_bytes()));
    }
    out
}

pub fn save_pgm(plane: &Plane, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_pgm(plane)).map_err(|e| IlcError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_bytes() {
        let p = parse_pgm(b"P5\n2 2\n255\n\x00\xff\x80\x07").unwrap();
        assert_eq!((p.width(), p.height(), p.bit_depth()), (2, 2, 8));
        assert_eq!(p.samples(), &[0, 255, 128, 7]);
    }

    #[test]
    fn comments_in_header() {
        let p = parse_pgm(b"P5 # made by hand\n3 # w\n1\n255 abc").unwrap();
        assert_eq!(p.samples(), &[97, 98, 99]);
    }

    #[test]
    fn rejects_bad_files() {
        let err = parse_pgm(b"P6\n1 1\n255\n\x00\x00\x00").unwrap_err();
        assert!(err.to_string().contains("unsupported format"));
        assert!(parse_pgm(b"P5\n2 2\n255\n\x00").unwrap_err().to_string().contains("truncated"));
        assert!(parse_pgm(b"P5\n1 1\n4095\n\x00\x00").unwrap_err().to_string().contains("maxval"));
        assert!(parse_pgm(b"P5\nx 1\n255\n\x00").is_err());
        assert!(parse_pgm(b"P5\n1 1\n100\n\xc8").is_err());
        assert!(parse_pgm(b"GIF89a").is_err());
    }

    #[test]
    fn ten_bit_is_big_endian() {
        let p = parse_pgm(b"P5\n2 1\n1023\n\x03\xff\x01\x00").unwrap();
        assert_eq!(p.bit_depth(), 10);
        assert_eq!(p.samples(), &[1023, 256]);
        assert_eq!(parse_pgm(&encode_pgm(&p)).unwrap(), p);
    }

    #[test]
    fn minimal_file() {
        let p = Plane::filled(1, 1, 8, 0).unwrap();
        let bytes = encode_pgm(&p);
        assert_eq!(bytes.len(), 12);
        assert_eq!(parse_pgm(&bytes).unwrap(), p);
    }
}
