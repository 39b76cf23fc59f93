//! Per-image, per-family benchmark and its CSV reports.

use std::path::Path;
use std::time::Instant;

use ilc_core::codec::{collect_stats, CodecConfig, UsageSummary};
use ilc_core::prediction::SIZE_CLASSES;
use ilc_core::training::{coded_bits, percent_reduction};
use ilc_core::{decode_plane, encode_plane, EncodeStats, IntraMode, PredictorFamily};
use rayon::prelude::*;

use crate::corpus::LabeledPlane;
use crate::error::{IlcError, Result};

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub class: String,
    pub image: String,
    pub family: PredictorFamily,
    pub width: usize,
    pub height: usize,
    /// Whole stream, embedded tables included.
    pub bits: u64,
    pub bpp: f64,
    /// Against the block family on the same image.
    pub reduction_percent: f64,
    pub encode_seconds: f64,
    pub decode_seconds: f64,
    pub encode_norm: f64,
    pub decode_norm: f64,
    pub stats: EncodeStats,
    /// Set when the encode or the round-trip check failed.
    pub error: Option<String>,
}

/// Aggregate over one class, or over everything when `class` is `all`.
#[derive(Debug, Clone)]
pub struct ClassRow {
    pub class: String,
    pub family: PredictorFamily,
    pub images: usize,
    pub bits: u64,
    pub average_reduction_percent: f64,
    pub encode_norm: f64,
    pub decode_norm: f64,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub families: Vec<PredictorFamily>,
    pub rows: Vec<BenchRow>,
    pub classes: Vec<ClassRow>,
    /// Selection histograms per family, in `families` order.
    pub usage: Vec<UsageSummary>,
}

struct Measured {
    bits: u64,
    stats: EncodeStats,
    encode: f64,
    decode: f64,
}

fn measure(image: &LabeledPlane, config: &CodecConfig) -> std::result::Result<Measured, String> {
    let t0 = Instant::now();
    let (stream, mut stats) = encode_plane(&image.plane, config).map_err(|e| e.to_string())?;
    let encode = t0.elapsed();
    let t1 = Instant::now();
    let back = decode_plane(&stream).map_err(|e| e.to_string())?;
    let decode = t1.elapsed();
    if back != image.plane {
        return Err("decoded plane differs from input".into());
    }
    stats.encode_time = encode;
    stats.decode_time = decode;
    Ok(Measured {
        bits: stats.total_bits,
        stats,
        encode: encode.as_secs_f64(),
        decode: decode.as_secs_f64(),
    })
}

fn ratio(a: f64, b: f64) -> f64 {
    if b > 0.0 {
        a / b
    } else {
        f64::NAN
    }
}

/// Encodes and decodes every image under every family. The block family is
/// always measured since it is the reference for reductions and timings.
/// Images run in parallel; the families of one image run back to back on
/// one thread.
pub fn run_bench(images: &[LabeledPlane], families: &[PredictorFamily], base: &CodecConfig) -> BenchReport {
    let mut fams = vec![PredictorFamily::Block];
    fams.extend(families.iter().copied().filter(|&f| f != PredictorFamily::Block));
    let per_image: Vec<Vec<BenchRow>> = images
        .par_iter()
        .map(|img| {
            let results: Vec<_> = fams
                .iter()
                .map(|&f| measure(img, &CodecConfig { family: f, ..base.clone() }))
                .collect();
            let block = results[0].as_ref().ok();
            fams.iter()
                .zip(results.iter())
                .map(|(&family, r)| {
                    let (w, h) = (img.plane.width(), img.plane.height());
                    let mut row = BenchRow {
                        class: img.class.clone(),
                        image: img.label.clone(),
                        family,
                        width: w,
                        height: h,
                        bits: 0,
                        bpp: f64::NAN,
                        reduction_percent: f64::NAN,
                        encode_seconds: f64::NAN,
                        decode_seconds: f64::NAN,
                        encode_norm: f64::NAN,
                        decode_norm: f64::NAN,
                        stats: EncodeStats::default(),
                        error: None,
                    };
                    match r {
                        Ok(m) => {
                            row.bits = m.bits;
                            row.bpp = m.bits as f64 / (w * h) as f64;
                            row.encode_seconds = m.encode;
                            row.decode_seconds = m.decode;
                            row.stats = m.stats.clone();
                            if let Some(b) = block {
                                row.reduction_percent = percent_reduction(b.bits, m.bits);
                                row.encode_norm = ratio(m.encode, b.encode);
                                row.decode_norm = ratio(m.decode, b.decode);
                            }
                        }
                        Err(e) => row.error = Some(e.clone()),
                    }
                    row
                })
                .collect()
        })
        .collect();
    let rows: Vec<BenchRow> = per_image.into_iter().flatten().collect();

    let mut class_names: Vec<String> = Vec::new();
    for r in &rows {
        if !class_names.contains(&r.class) {
            class_names.push(r.class.clone());
        }
    }
    let mut classes = Vec::new();
    let groups: Vec<Option<&str>> = class_names.iter().map(|c| Some(c.as_str())).chain([None]).collect();
    for group in groups {
        for &family in &fams {
            let ok = |r: &&BenchRow| r.error.is_none() && group.is_none_or(|c| r.class == c);
            let sel: Vec<&BenchRow> = rows.iter().filter(|r| r.family == family).filter(ok).collect();
            let base_sel: Vec<&BenchRow> = rows.iter().filter(|r| r.family == PredictorFamily::Block).filter(ok).collect();
            if sel.is_empty() {
                continue;
            }
            let sum = |v: &[&BenchRow], f: fn(&BenchRow) -> f64| v.iter().map(|r| f(r)).sum::<f64>();
            classes.push(ClassRow {
                class: group.unwrap_or("all").to_string(),
                family,
                images: sel.len(),
                bits: sel.iter().map(|r| r.bits).sum(),
                average_reduction_percent: sum(&sel, |r| r.reduction_percent) / sel.len() as f64,
                encode_norm: ratio(sum(&sel, |r| r.encode_seconds), sum(&base_sel, |r| r.encode_seconds)),
                decode_norm: ratio(sum(&sel, |r| r.decode_seconds), sum(&base_sel, |r| r.decode_seconds)),
            });
        }
    }
    let usage = fams
        .iter()
        .map(|&f| collect_stats(rows.iter().filter(|r| r.family == f && r.error.is_none()).map(|r| &r.stats)))
        .collect();
    BenchReport {
        families: fams,
        rows,
        classes,
        usage,
    }
}

impl BenchReport {
    pub fn class_row(&self, class: &str, family: PredictorFamily) -> Option<&ClassRow> {
        self.classes.iter().find(|c| c.class == class && c.family == family)
    }

    pub fn usage(&self, family: PredictorFamily) -> Option<&UsageSummary> {
        self.families.iter().position(|&f| f == family).map(|i| &self.usage[i])
    }

    /// Reduction of a family recomputed from prediction bits alone (tables
    /// excluded), averaged over images.
    pub fn coded_reduction(&self, family: PredictorFamily) -> f64 {
        let mut sum = 0.0;
        let mut n = 0;
        for r in self.rows.iter().filter(|r| r.family == family && r.error.is_none()) {
            if let Some(b) = self
                .rows
                .iter()
                .find(|b| b.family == PredictorFamily::Block && b.image == r.image && b.error.is_none())
            {
                sum += percent_reduction(coded_bits(&b.stats), coded_bits(&r.stats));
                n += 1;
            }
        }
        sum / n.max(1) as f64
    }

    pub fn write_rows(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
        w.write_record([
            "class", "image", "family", "width", "height", "bits", "bpp", "reduction_percent", "encode_ms",
            "decode_ms", "encode_norm", "decode_norm", "status",
        ])?;
        for r in &self.rows {
            w.write_record([
                r.class.clone(),
                r.image.clone(),
                r.family.to_string(),
                r.width.to_string(),
                r.height.to_string(),
                r.bits.to_string(),
                format!("{:.4}", r.bpp),
                format!("{:.3}", r.reduction_percent),
                format!("{:.3}", r.encode_seconds * 1e3),
                format!("{:.3}", r.decode_seconds * 1e3),
                format!("{:.3}", r.encode_norm),
                format!("{:.3}", r.decode_norm),
                r.error.clone().unwrap_or_else(|| "ok".into()),
            ])?;
        }
        w.flush().map_err(|e| IlcError::io(path, e))
    }

    /// Per-class averages, doubling as the normalized timing table.
    pub fn write_classes(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
        w.write_record(["class", "family", "images", "bits", "avg_reduction_percent", "encode_norm", "decode_norm"])?;
        for c in &self.classes {
            w.write_record([
                c.class.clone(),
                c.family.to_string(),
                c.images.to_string(),
                c.bits.to_string(),
                format!("{:.3}", c.average_reduction_percent),
                format!("{:.3}", c.encode_norm),
                format!("{:.3}", c.decode_norm),
            ])?;
        }
        w.flush().map_err(|e| IlcError::io(path, e))
    }

    pub fn write_modes(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
        w.write_record(["family", "mode", "count", "percent"])?;
        for (f, u) in self.families.iter().zip(&self.usage) {
            for m in IntraMode::all() {
                let i = m.index() as usize;
                w.write_record([
                    f.to_string(),
                    i.to_string(),
                    u.totals.mode_counts[i].to_string(),
                    format!("{:.3}", u.mode_percent[i]),
                ])?;
            }
        }
        w.flush().map_err(|e| IlcError::io(path, e))
    }

    pub fn write_sizes(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
        w.write_record(["family", "size", "leaves", "leaf_percent", "pixel_percent"])?;
        for (f, u) in self.families.iter().zip(&self.usage) {
            for c in 0..SIZE_CLASSES {
                w.write_record([
                    f.to_string(),
                    (4usize << c).to_string(),
                    u.totals.size_counts[c].to_string(),
                    format!("{:.3}", u.size_percent[c]),
                    format!("{:.3}", u.size_pixel_percent[c]),
                ])?;
            }
        }
        w.flush().map_err(|e| IlcError::io(path, e))
    }

    /// Writes `report.csv`, `classes.csv`, `modes.csv` and `sizes.csv`.
    pub fn write_all(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| IlcError::io(dir, e))?;
        self.write_rows(&dir.join("report.csv"))?;
        self.write_classes(&dir.join("classes.csv"))?;
        self.write_modes(&dir.join("modes.csv"))?;
        self.write_sizes(&dir.join("sizes.csv"))
    }
}

pub(crate) fn csv_io(path: &Path, e: csv::Error) -> IlcError {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => IlcError::io(path, io),
            _ => unreachable!(),
        }
    } else {
        IlcError::Csv(e)
    }
}
