use alloc::vec::Vec;

use super::moments::{accumulate_moments, CorpusEncode, MomentSet};
use super::quantize::{quantize_weights, RealTable};
use super::solve::{solve_with_threshold, MIN_SAMPLES};
use crate::codec::{CodecConfig, CodecError, PredictorFamily};
use crate::plane::Corpus;
use crate::prediction::{SlotLayout, WeightTable};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainingOptions {
    pub layout: SlotLayout,
    /// Fractional bits of the integer table used between iterations.
    pub shift: u32,
    pub max_iterations: usize,
    /// Stop once no weight moves by this much.
    pub tolerance: f64,
    pub min_samples: u64,
}

impl Default for TrainingOptions {
    fn default() -> Self {
        TrainingOptions {
            layout: SlotLayout::SHIPPED,
            shift: WeightTable::SHIPPED_SHIFT,
            max_iterations: 15,
            tolerance: 1.0 / 64.0,
            min_samples: MIN_SAMPLES,
        }
    }
}

/// One encode → accumulate → solve pass.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    /// Family that chose the mode assignment of this pass.
    pub family: PredictorFamily,
    /// Corpus bits (without embedded tables) and MSE of the encode feeding
    /// this pass.
    pub bits: u64,
    pub mse: f64,
    /// Weights solved from this pass.
    pub weights: RealTable,
    pub solved_slots: usize,
    pub max_delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingRun {
    pub iterations: Vec<IterationRecord>,
    pub weights: RealTable,
    pub converged: bool,
}

impl TrainingRun {
    /// Final weights quantized at `shift`, slots out of range falling back to `fallback`.
    pub fn quantized(&self, shift: u32, fallback: &WeightTable) -> Result<WeightTable, CodecError> {
        quantize_weights(&self.weights, shift, fallback).map_err(CodecError::Weights)
    }
}

/// Solves every slot with enough data; the rest keep `previous`.
pub fn solve_moments(moments: &MomentSet, previous: &RealTable, min_samples: u64) -> (RealTable, usize) {
    let mut out = previous.clone();
    let mut solved = 0;
    for (slot, acc) in moments.slots().iter().enumerate() {
        if let Ok(w) = solve_with_threshold(acc, min_samples) {
            out.triples[slot] = w;
            solved += 1;
        }
    }
    (out, solved)
}

/// Encodes a corpus and gathers per-slot moments.
pub trait MomentSource {
    fn moments(
        &self,
        corpus: &Corpus,
        config: &CodecConfig,
        layout: SlotLayout,
    ) -> Result<(MomentSet, CorpusEncode), CodecError>;
}

/// [`accumulate_moments`] on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct SerialMoments;

impl MomentSource for SerialMoments {
    fn moments(
        &self,
        corpus: &Corpus,
        config: &CodecConfig,
        layout: SlotLayout,
    ) -> Result<(MomentSet, CorpusEncode), CodecError> {
        accumulate_moments(corpus, config, layout)
    }
}

/// Iterative least-squares training of the 3-tap weights.
///
/// The first pass takes its mode assignment from an SAP encode. Later passes
/// re-encode with the 3-tap family using the previous weights quantized at
/// `options.shift`, letting mode decision react to the new filters. Slots
/// short of data keep the weights of `config.weights`.
pub fn iterate_mse_training(
    corpus: &Corpus,
    config: &CodecConfig,
    options: &TrainingOptions,
) -> Result<TrainingRun, CodecError> {
    iterate_mse_training_with(corpus, config, options, &SerialMoments)
}

/// [`iterate_mse_training`] with moments from `source`.
pub fn iterate_mse_training_with(
    corpus: &Corpus,
    config: &CodecConfig,
    options: &TrainingOptions,
    source: &dyn MomentSource,
) -> Result<TrainingRun, CodecError> {
    let fallback = config
        .weights
        .expanded(options.layout, options.shift)
        .map_err(CodecError::Weights)?;
    let mut real = RealTable::from_table(&fallback, options.layout).map_err(CodecError::Weights)?;
    let mut iterations = Vec::new();
    let mut converged = false;
    for iteration in 0..options.max_iterations {
        let pass_config = if iteration == 0 {
            CodecConfig {
                family: PredictorFamily::Sap,
                ..config.clone()
            }
        } else {
            CodecConfig {
                family: PredictorFamily::ThreeTap,
                weights: quantize_weights(&real, options.shift, &fallback).map_err(CodecError::Weights)?,
                ..config.clone()
            }
        };
        let (moments, encode) = source.moments(corpus, &pass_config, options.layout)?;
        let (next, solved_slots) = solve_moments(&moments, &real, options.min_samples);
        let max_delta = next.max_abs_delta(&real);
        iterations.push(IterationRecord {
            iteration,
            family: pass_config.family,
            bits: encode.bits,
            mse: encode.mse(),
            weights: next.clone(),
            solved_slots,
            max_delta,
        });
        real = next;
        if max_delta < options.tolerance {
            converged = true;
            break;
        }
    }
    Ok(TrainingRun {
        iterations,
        weights: real,
        converged,
    })
}
