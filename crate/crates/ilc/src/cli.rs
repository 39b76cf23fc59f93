//! `ilc encode | decode | train | bench | ablate`.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use ilc_core::codec::CodecConfig;
use ilc_core::training::{ablation_run_with, AblationVariant, TrainingOptions};
use ilc_core::{decode_plane, encode_plane, PredictorFamily, WeightTable};

use crate::bench::{csv_io, run_bench};
use crate::corpus::{load_corpus, load_dir};
use crate::error::{IlcError, Result};
use crate::oracle::ParallelOracle;
use crate::pgm::{load_pgm, save_pgm};
use crate::tables::{format_neighbors, load_neighbors, load_weights, save_weights};
use crate::train::{train, write_training_log, Stage, TrainSettings};
use crate::yuv::{extract_luma_from_yuv, parse_geometry};

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "ilc", version, about = "Lossless intra codec with block, SAP and 3-tap prediction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct CodecArgs {
    /// 3-tap weight table.
    #[arg(long)]
    weights: Option<PathBuf>,
    /// 3-tap neighbour table.
    #[arg(long)]
    neighbors: Option<PathBuf>,
    /// CTU edge: 4, 8, 16 or 32.
    #[arg(long, default_value_t = 32)]
    ctu: usize,
}

impl CodecArgs {
    fn config(&self, family: PredictorFamily) -> Result<CodecConfig> {
        let mut c = CodecConfig::new(family).with_ctu_size(self.ctu);
        if let Some(p) = &self.weights {
            c = c.with_weights(load_weights(p)?);
        }
        if let Some(p) = &self.neighbors {
            c = c.with_neighbors(load_neighbors(p)?);
        }
        c.validate()?;
        Ok(c)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Encode a PGM image (or one luma frame of a raw 4:2:0 file).
    Encode {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, default_value = "three-tap", value_parser = parse_family)]
        family: PredictorFamily,
        #[command(flatten)]
        codec: CodecArgs,
        /// Treat the input as raw 8-bit 4:2:0 of this geometry.
        #[arg(long, value_name = "WxH")]
        yuv: Option<String>,
        #[arg(long, default_value_t = 0, requires = "yuv")]
        frame: usize,
        /// Append a stats row to this CSV.
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Decode a bitstream to PGM.
    Decode { input: PathBuf, output: PathBuf },
    /// Train 3-tap weights on a directory of PGM images.
    Train {
        corpus: PathBuf,
        output: PathBuf,
        #[arg(long, default_value = "mse", value_parser = parse_stage)]
        stage: Stage,
        #[command(flatten)]
        codec: CodecArgs,
        /// Training log; defaults to the output path with a `.csv` extension.
        #[arg(long)]
        log: Option<PathBuf>,
        #[arg(long, default_value_t = 15)]
        max_iterations: usize,
        /// Cap on bitrate-refinement sweeps.
        #[arg(long)]
        max_sweeps: Option<usize>,
        #[arg(long, default_value_t = ilc_core::training::MIN_SAMPLES)]
        min_samples: u64,
    },
    /// Code every image with every family and write CSV reports.
    Bench {
        corpus: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "block,sap,three-tap,block+rdpcm", value_parser = parse_family)]
        families: Vec<PredictorFamily>,
        #[command(flatten)]
        codec: CodecArgs,
        /// Report directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Compare weight layouts and precisions trained on one set, tested on another.
    Ablate {
        train: PathBuf,
        test: PathBuf,
        #[arg(long, default_value = "ablation.csv")]
        out: PathBuf,
        #[arg(long, default_value_t = 15)]
        max_iterations: usize,
        #[arg(long, default_value_t = ilc_core::training::MIN_SAMPLES)]
        min_samples: u64,
    },
    /// Print the compiled-in 3-tap tables.
    Tables {
        /// `weights` or `neighbors`.
        #[arg(default_value = "weights")]
        which: String,
    },
}

fn parse_family(s: &str) -> std::result::Result<PredictorFamily, String> {
    PredictorFamily::from_name(s).ok_or_else(|| format!("unknown family {s:?} (block, sap, three-tap, block+rdpcm)"))
}

fn parse_stage(s: &str) -> std::result::Result<Stage, String> {
    Stage::from_name(s).ok_or_else(|| format!("unknown stage {s:?} (mse, mse+bitrate)"))
}

/// Runs the tool and returns its exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("ilc: {e}");
            EXIT_DATA
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| IlcError::io(path, e))
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Encode {
            input,
            output,
            family,
            codec,
            yuv,
            frame,
            stats,
        } => {
            let config = codec.config(family)?;
            let plane = match yuv {
                Some(g) => {
                    let (w, h) = parse_geometry(&g).ok_or_else(|| IlcError::Format(format!("bad geometry {g:?}, expected WxH")))?;
                    extract_luma_from_yuv(&input, w, h, frame)?
                }
                None => load_pgm(&input)?,
            };
            let t = Instant::now();
            let (stream, s) = encode_plane(&plane, &config)?;
            let elapsed = t.elapsed();
            write_file(&output, stream.as_bytes())?;
            eprintln!(
                "{}: {}x{} {} bits, {:.4} bpp, {:.1} ms ({family})",
                output.display(),
                plane.width(),
                plane.height(),
                s.total_bits,
                s.total_bits as f64 / (plane.width() * plane.height()) as f64,
                elapsed.as_secs_f64() * 1e3
            );
            if let Some(path) = stats {
                let fresh = !path.exists();
                let file = fs::OpenOptions::new()
                    .create(true)
                    .append(true)
                    .open(&path)
                    .map_err(|e| IlcError::io(&path, e))?;
                let mut w = csv::Writer::from_writer(file);
                if fresh {
                    w.write_record(["input", "family", "width", "height", "bits", "bpp", "encode_ms"])?;
                }
                w.write_record([
                    input.display().to_string(),
                    family.to_string(),
                    plane.width().to_string(),
                    plane.height().to_string(),
                    s.total_bits.to_string(),
                    format!("{:.4}", s.total_bits as f64 / (plane.width() * plane.height()) as f64),
                    format!("{:.3}", elapsed.as_secs_f64() * 1e3),
                ])?;
                w.flush().map_err(|e| IlcError::io(&path, e))?;
            }
            Ok(())
        }
        Command::Decode { input, output } => {
            let bytes = fs::read(&input).map_err(|e| IlcError::io(&input, e))?;
            let plane = decode_plane(&bytes)?;
            save_pgm(&plane, &output)
        }
        Command::Train {
            corpus,
            output,
            stage,
            codec,
            log,
            max_iterations,
            max_sweeps,
            min_samples,
        } => {
            let config = codec.config(PredictorFamily::ThreeTap)?;
            let corpus = load_corpus(&corpus)?;
            let settings = TrainSettings {
                stage,
                options: TrainingOptions {
                    max_iterations,
                    min_samples,
                    ..TrainingOptions::default()
                },
                max_sweeps: max_sweeps.unwrap_or(usize::MAX),
            };
            let oracle = ParallelOracle::default();
            let outcome = train(&corpus, &config, &settings, &oracle)?;
            save_weights(outcome.weights(), &output)?;
            let log = log.unwrap_or_else(|| output.with_extension("csv"));
            write_training_log(&outcome, &log)?;
            let last = outcome.mse.iterations.last().expect("at least one iteration");
            eprintln!(
                "stage 1: {} iterations, converged {}, {} bits",
                outcome.mse.iterations.len(),
                outcome.mse.converged,
                last.bits
            );
            if let Some(r) = &outcome.refinement {
                eprintln!(
                    "stage 2: {} sweeps, {} adoptions, {} -> {} bits",
                    r.sweeps,
                    r.adoptions.len(),
                    r.initial_bits(),
                    r.final_bits()
                );
            }
            Ok(())
        }
        Command::Bench {
            corpus,
            families,
            codec,
            out,
        } => {
            let base = codec.config(PredictorFamily::Block)?;
            let images = load_dir(&corpus)?;
            let oracle = ParallelOracle::default();
            let report = oracle.install(|| run_bench(&images, &families, &base));
            report.write_all(&out)?;
            for c in report.classes.iter().filter(|c| c.class == "all") {
                eprintln!(
                    "{:>12}: {:7.3}% vs block, encode x{:.2}, decode x{:.2}",
                    c.family.name(),
                    c.average_reduction_percent,
                    c.encode_norm,
                    c.decode_norm
                );
            }
            for r in report.rows.iter().filter(|r| r.error.is_some()) {
                eprintln!("{} {}: {}", r.image, r.family, r.error.as_deref().unwrap_or(""));
            }
            Ok(())
        }
        Command::Ablate {
            train,
            test,
            out,
            max_iterations,
            min_samples,
        } => {
            let train = load_corpus(&train)?;
            let test = load_corpus(&test)?;
            let options = TrainingOptions {
                max_iterations,
                min_samples,
                ..TrainingOptions::default()
            };
            let oracle = ParallelOracle::default();
            let config = CodecConfig::default();
            let mut w = csv::Writer::from_path(&out).map_err(|e| csv_io(&out, e))?;
            w.write_record(["variant", "image", "block_bits", "bits", "reduction_percent"])?;
            for variant in AblationVariant::COLUMNS {
                let r = ablation_run_with(&train, &test, variant, &config, &options, &oracle)?;
                for row in &r.rows {
                    w.write_record([
                        variant.label(),
                        row.label.clone(),
                        row.block_bits.to_string(),
                        row.bits.to_string(),
                        format!("{:.3}", row.reduction_percent),
                    ])?;
                }
                w.write_record([
                    variant.label(),
                    "average".into(),
                    r.total_block_bits.to_string(),
                    r.total_bits.to_string(),
                    format!("{:.3}", r.average_reduction),
                ])?;
                eprintln!("{:>28}: {:7.3}%", variant.label(), r.average_reduction);
            }
            w.flush().map_err(|e| IlcError::io(&out, e))
        }
        Command::Tables { which } => {
            match which.as_str() {
                "weights" => print!("{}", crate::tables::format_weights(&WeightTable::shipped())),
                "neighbors" => print!("{}", format_neighbors(&ilc_core::NeighborConfig::shipped())),
                other => return Err(IlcError::Table(format!("unknown table {other:?}"))),
            }
            Ok(())
        }
    }
}
