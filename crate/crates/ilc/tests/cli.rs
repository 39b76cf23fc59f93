use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ilc::pgm::{load_pgm, save_pgm};
use ilc::tables::load_weights;

fn ilc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ilc")).args(args).output().expect("run ilc")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(rel)
}

/// 32x32 crops of the training fixtures, so training runs stay short.
fn small_corpus(dir: &Path) -> PathBuf {
    let out = dir.join("corpus");
    fs::create_dir(&out).unwrap();
    for name in ["grass", "gravel", "hubble_deep_field"] {
        let p = load_pgm(fixture(&format!("train/{name}.pgm"))).unwrap();
        save_pgm(&p.crop(32, 32), out.join(format!("{name}.pgm"))).unwrap();
    }
    out
}

#[test]
fn encode_decode_every_family() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("natural/astronaut.pgm");
    for family in ["block", "sap", "three-tap", "block+rdpcm"] {
        let bits = dir.path().join(format!("{family}.ilc"));
        let back = dir.path().join(format!("{family}.pgm"));
        let out = ilc(&["encode", s(&input), s(&bits), "--family", family]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        assert!(ilc(&["decode", s(&bits), s(&back)]).status.success());
        assert_eq!(load_pgm(&back).unwrap(), load_pgm(&input).unwrap(), "{family}");
    }
}

#[test]
fn yuv_input_and_stats_csv() {
    let dir = tempfile::tempdir().unwrap();
    let yuv = dir.path().join("clip.yuv");
    let frame: Vec<u8> = (0..48 * 32 * 3 / 2).map(|i| (i % 251) as u8).collect();
    fs::write(&yuv, [frame.clone(), frame].concat()).unwrap();
    let bits = dir.path().join("f1.ilc");
    let stats = dir.path().join("stats.csv");
    let out = ilc(&["encode", s(&yuv), s(&bits), "--yuv", "48x32", "--frame", "1", "--stats", s(&stats)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    ilc(&["encode", s(&yuv), s(&bits), "--yuv", "48x32", "--stats", s(&stats)]);
    let text = fs::read_to_string(&stats).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("input,family,width,height,bits,bpp,encode_ms"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("natural/astronaut.pgm");
    let bits = dir.path().join("x.ilc");
    assert_eq!(ilc(&["encode"]).status.code(), Some(1));
    assert_eq!(ilc(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(ilc(&["encode", s(&input), s(&bits), "--family", "nope"]).status.code(), Some(1));
    let missing = ilc(&["encode", s(&input), s(&bits), "--weights", "/nonexistent/w.txt"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&missing.stderr).is_empty());

    let junk = dir.path().join("junk.ilc");
    fs::write(&junk, b"not a stream at all").unwrap();
    let out = ilc(&["decode", s(&junk), s(&dir.path().join("o.pgm"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tables_prints_shipped_weights() {
    let out = ilc(&["tables", "weights"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(ilc::tables::parse_weights(&text).unwrap(), ilc_core::WeightTable::shipped());
}

#[test]
fn train_both_stages() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = small_corpus(dir.path());
    let mse = dir.path().join("mse.txt");
    let out = ilc(&["train", s(&corpus), s(&mse), "--stage", "mse", "--min-samples", "50"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = load_weights(&mse).unwrap();
    assert_eq!(table.slot_count(), 19);
    assert!(table.triples().iter().all(|t| t.iter().sum::<i32>() == 32));
    assert!(mse.with_extension("csv").exists());

    let again = dir.path().join("mse2.txt");
    ilc(&["train", s(&corpus), s(&again), "--stage", "mse", "--min-samples", "50"]);
    assert_eq!(fs::read(&mse).unwrap(), fs::read(&again).unwrap());

    let full = dir.path().join("full.txt");
    let log = dir.path().join("full-log.csv");
    let out = ilc(&[
        "train", s(&corpus), s(&full), "--stage", "mse+bitrate", "--min-samples", "50", "--max-sweeps", "2", "--log",
        s(&log),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut reader = csv::Reader::from_path(&log).unwrap();
    let bits: Vec<u64> = reader
        .records()
        .map(|r| r.unwrap())
        .filter(|r| &r[0] == "bitrate")
        .map(|r| r[7].parse().unwrap())
        .collect();
    assert!(!bits.is_empty());
    assert!(bits.windows(2).all(|w| w[1] < w[0]), "{bits:?}");
}

#[test]
fn bench_single_image() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("one");
    fs::create_dir(&corpus).unwrap();
    let p = load_pgm(fixture("natural/astronaut.pgm")).unwrap();
    save_pgm(&p.crop(64, 64), corpus.join("astronaut.pgm")).unwrap();
    let out_dir = dir.path().join("report");
    fs::create_dir(&out_dir).unwrap();
    let out = ilc(&["bench", s(&corpus), "--out", s(&out_dir)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let mut report = csv::Reader::from_path(out_dir.join("report.csv")).unwrap();
    let rows: Vec<_> = report.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| &r[12] == "ok"));

    for (file, column) in [("modes.csv", 3), ("sizes.csv", 3), ("sizes.csv", 4)] {
        let mut r = csv::Reader::from_path(out_dir.join(file)).unwrap();
        let mut sums = std::collections::BTreeMap::<String, f64>::new();
        for rec in r.records() {
            let rec = rec.unwrap();
            *sums.entry(rec[0].to_string()).or_default() += rec[column].parse::<f64>().unwrap();
        }
        assert_eq!(sums.len(), 4, "{file}");
        for (family, total) in sums {
            assert!((total - 100.0).abs() <= 0.1, "{file} {family}: {total}");
        }
    }
}
