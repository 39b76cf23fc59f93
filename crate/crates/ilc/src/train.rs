//! Training pipelines and their CSV logs.

use std::path::Path;

use ilc_core::codec::CodecConfig;
use ilc_core::training::{
    iterate_mse_training_with, refine_with_limit, BitrateOracle, MomentSource, Refinement, TrainingOptions,
    TrainingRun,
};
use ilc_core::{Corpus, WeightTable};

use crate::bench::csv_io;
use crate::error::{IlcError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Mse,
    MseBitrate,
}

impl Stage {
    pub fn from_name(s: &str) -> Option<Stage> {
        match s {
            "mse" => Some(Stage::Mse),
            "mse+bitrate" | "bitrate" => Some(Stage::MseBitrate),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrainSettings {
    pub stage: Stage,
    pub options: TrainingOptions,
    pub max_sweeps: usize,
}

impl Default for TrainSettings {
    fn default() -> Self {
        TrainSettings {
            stage: Stage::Mse,
            options: TrainingOptions::default(),
            max_sweeps: usize::MAX,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub mse: TrainingRun,
    pub mse_weights: WeightTable,
    pub refinement: Option<Refinement>,
}

impl TrainOutcome {
    pub fn weights(&self) -> &WeightTable {
        self.refinement.as_ref().map_or(&self.mse_weights, |r| &r.weights)
    }
}

pub fn train<O: MomentSource + BitrateOracle>(
    corpus: &Corpus,
    config: &CodecConfig,
    settings: &TrainSettings,
    oracle: &O,
) -> Result<TrainOutcome> {
    let mse = iterate_mse_training_with(corpus, config, &settings.options, oracle)?;
    let mse_weights = mse.quantized(settings.options.shift, &config.weights)?;
    let refinement = match settings.stage {
        Stage::Mse => None,
        Stage::MseBitrate => Some(refine_with_limit(&mse_weights, corpus, config, oracle, settings.max_sweeps)?),
    };
    Ok(TrainOutcome {
        mse,
        mse_weights,
        refinement,
    })
}

/// Columns `stage, iteration, slot, rho1, rho2, rho3, mse, bits, candidate`.
/// Stage-one rows carry real weights per slot and iteration; stage-two rows
/// carry one adopted integer triple each, plus a `start` row.
pub fn write_training_log(outcome: &TrainOutcome, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
    w.write_record(["stage", "iteration", "slot", "rho1", "rho2", "rho3", "mse", "bits", "candidate"])?;
    for it in &outcome.mse.iterations {
        for (slot, r) in it.weights.triples.iter().enumerate() {
            w.write_record([
                "mse".to_string(),
                it.iteration.to_string(),
                slot.to_string(),
                format!("{:.6}", r[0]),
                format!("{:.6}", r[1]),
                format!("{:.6}", r[2]),
                format!("{:.4}", it.mse),
                it.bits.to_string(),
                String::new(),
            ])?;
        }
    }
    if let Some(r) = &outcome.refinement {
        w.write_record(["bitrate", "0", "", "", "", "", "", &r.initial_bits().to_string(), "start"])?;
        for a in &r.adoptions {
            w.write_record([
                "bitrate".to_string(),
                a.sweep.to_string(),
                a.slot.to_string(),
                a.after[0].to_string(),
                a.after[1].to_string(),
                a.after[2].to_string(),
                String::new(),
                a.bits_after.to_string(),
                (a.candidate + 1).to_string(),
            ])?;
        }
    }
    w.flush().map_err(|e| IlcError::io(path, e))
}
