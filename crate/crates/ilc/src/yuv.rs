//! Luma planes of raw 8-bit 4:2:0 files.

use std::fs::File;
use std::io::{Read, Seek, SeekFrom};
use std::path::Path;

use ilc_core::Plane;

use crate::error::{IlcError, Result};

/// Bytes per frame: a full-size Y plane and two quarter-size chroma planes.
pub fn frame_stride(width: usize, height: usize) -> usize {
    width * height + 2 * (width.div_ceil(2) * height.div_ceil(2))
}

/// Y plane of frame `frame` (zero-based).
pub fn extract_luma_from_yuv(path: impl AsRef<Path>, width: usize, height: usize, frame: usize) -> Result<Plane> {
    let path = path.as_ref();
    if width == 0 || height == 0 {
        return Err(IlcError::Format("yuv geometry must be non-zero".into()));
    }
    let mut file = File::open(path).map_err(|e| IlcError::io(path, e))?;
    let len = file.metadata().map_err(|e| IlcError::io(path, e))?.len();
    let offset = (frame_stride(width, height) as u64) * frame as u64;
    let need = offset + (width * height) as u64;
    if len < need {
        return Err(IlcError::Format(format!(
            "{}: frame {frame} needs {need} bytes, file has {len}",
            path.display()
        )));
    }
    file.seek(SeekFrom::Start(offset)).map_err(|e| IlcError::io(path, e))?;
    let mut luma = vec![0u8; width * height];
    file.read_exact(&mut luma).map_err(|e| IlcError::io(path, e))?;
    Ok(Plane::new(width, height, 8, luma.into_iter().map(u16::from).collect())?)
}

/// Parses `WxH`.
pub fn parse_geometry(s: &str) -> Option<(usize, usize)> {
    let (w, h) = s.split_once(['x', 'X'])?;
    Some((w.trim().parse().ok()?, h.trim().parse().ok()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry() {
        assert_eq!(parse_geometry("416x240"), Some((416, 240)));
        assert_eq!(parse_geometry("416"), None);
        assert_eq!(frame_stride(2, 2), 6);
        assert_eq!(frame_stride(3, 3), 9 + 8);
    }
}
