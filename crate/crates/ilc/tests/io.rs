use std::fs;

use ilc::pgm::{encode_pgm, load_pgm, parse_pgm, save_pgm};
use ilc::tables::{format_neighbors, format_weights, parse_neighbors, parse_weights};
use ilc::yuv::{extract_luma_from_yuv, frame_stride};
use ilc_core::{NeighborConfig, Plane, WeightTable};
use proptest::prelude::*;

fn plane_strategy() -> impl Strategy<Value = Plane> {
    (1usize..40, 1usize..40, prop::bool::ANY).prop_flat_map(|(w, h, ten)| {
        let bd = if ten { 10 } else { 8 };
        prop::collection::vec(0u16..(1 << bd), w * h).prop_map(move |s| Plane::new(w, h, bd, s).unwrap())
    })
}

proptest! {
    #[test]
    fn pgm_round_trip(plane in plane_strategy()) {
        prop_assert_eq!(parse_pgm(&encode_pgm(&plane)).unwrap(), plane);
    }
}

#[test]
fn handwritten_p5() {
    let bytes = b"P5\n# two by two\n2 2\n255\n\x00\x10\x80\xff";
    let p = parse_pgm(bytes).unwrap();
    assert_eq!((p.width(), p.height(), p.bit_depth()), (2, 2, 8));
    assert_eq!(p.samples(), &[0, 16, 128, 255]);

    let ten = b"P5 1 2 1023 \x03\xff\x00\x01";
    let p = parse_pgm(ten).unwrap();
    assert_eq!((p.bit_depth(), p.samples()), (10, &[1023u16, 1][..]));
}

#[test]
fn malformed_pgm_is_rejected() {
    for (bytes, needle) in [
        (&b"P2\n2 2\n255\n0 0 0 0"[..], "unsupported"),
        (&b"P5\n2 2\n65535\n"[..], "maxval"),
        (&b"P5\n2 2\n255\n\x00"[..], "truncated"),
        (&b"P5\n2 x\n255\n"[..], "header"),
        (&b"P5 1 1 100 \x70"[..], "maxval"),
    ] {
        let msg = parse_pgm(bytes).unwrap_err().to_string();
        assert!(msg.contains(needle), "{msg}");
    }
}

#[test]
fn large_frame_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("uhd.pgm");
    let plane = Plane::from_fn(4096, 2160, 8, |x, y| ((x ^ y) & 0xff) as u16).unwrap();
    save_pgm(&plane, &path).unwrap();
    assert_eq!(fs::metadata(&path).unwrap().len() as usize, "P5\n4096 2160\n255\n".len() + 4096 * 2160);
    assert_eq!(load_pgm(&path).unwrap(), plane);
}

#[test]
fn yuv_frames_are_located_by_stride() {
    let (w, h) = (6, 4);
    assert_eq!(frame_stride(w, h), 36);
    assert_eq!(frame_stride(5, 3), 15 + 2 * 6);
    let mut bytes = Vec::new();
    for f in 0..3u8 {
        bytes.extend((0..w * h).map(|i| f * 50 + i as u8));
        bytes.extend(std::iter::repeat(200 + f).take(frame_stride(w, h) - w * h));
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("clip.yuv");
    fs::write(&path, &bytes).unwrap();
    for f in 0..3usize {
        let p = extract_luma_from_yuv(&path, w, h, f).unwrap();
        let want: Vec<u16> = (0..w * h).map(|i| (f * 50 + i) as u16).collect();
        assert_eq!(p.samples(), &want[..]);
    }
    assert!(extract_luma_from_yuv(&path, w, h, 3).is_err());
}

#[test]
fn tables_text_round_trip() {
    let shipped = WeightTable::shipped();
    assert_eq!(parse_weights(&format_weights(&shipped)).unwrap(), shipped);
    let n = NeighborConfig::shipped();
    assert_eq!(parse_neighbors(&format_neighbors(&n)).unwrap(), n);
}

#[test]
fn bad_weight_text_is_rejected() {
    let text = format_weights(&WeightTable::shipped());
    // A row whose weights no longer sum to the unit.
    let broken = text.replacen("22 -11 21", "22 -11 20", 1);
    assert_ne!(broken, text);
    assert!(parse_weights(&broken).is_err());
    assert!(parse_weights("shift 5\nlayout symmetric shared\n").is_err());
}
