use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::stage2::coded_bits;
use super::stage1::{iterate_mse_training_with, MomentSource, SerialMoments, TrainingOptions, TrainingRun};
use crate::codec::{encode_plane, CodecConfig, CodecError, PredictorFamily};
use crate::plane::Corpus;
use crate::prediction::{ModePooling, SlotLayout, WeightTable};

/// One column of the implementation-settings comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AblationVariant {
    pub per_block_size: bool,
    pub shift: u32,
    pub pooling: ModePooling,
}

impl AblationVariant {
    /// Settings from most to least flexible, ending at the shipped one.
    pub const COLUMNS: [AblationVariant; 4] = [
        AblationVariant::new(true, 10, ModePooling::PerMode),
        AblationVariant::new(false, 10, ModePooling::PerMode),
        AblationVariant::new(false, 5, ModePooling::PerMode),
        AblationVariant::new(false, 5, ModePooling::Symmetric),
    ];

    pub const fn new(per_block_size: bool, shift: u32, pooling: ModePooling) -> Self {
        AblationVariant {
            per_block_size,
            shift,
            pooling,
        }
    }

    pub const fn layout(self) -> SlotLayout {
        SlotLayout {
            pooling: self.pooling,
            per_block_size: self.per_block_size,
        }
    }

    pub fn label(self) -> String {
        format!(
            "{}/{}-bit/{}",
            if self.per_block_size { "per-size" } else { "shared-size" },
            self.shift,
            match self.pooling {
                ModePooling::PerMode => "per-mode",
                ModePooling::Symmetric => "symmetric",
            }
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AblationRow {
    pub label: String,
    pub block_bits: u64,
    pub bits: u64,
    pub reduction_percent: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AblationReport {
    pub variant: AblationVariant,
    pub weights: WeightTable,
    pub training: TrainingRun,
    pub rows: Vec<AblationRow>,
    /// Mean of the per-plane reductions.
    pub average_reduction: f64,
    pub total_block_bits: u64,
    pub total_bits: u64,
}

/// `100 · (base - variant) / base`.
pub fn percent_reduction(base: u64, variant: u64) -> f64 {
    if base == 0 {
        0.0
    } else {
        100.0 * (base as f64 - variant as f64) / base as f64
    }
}

/// Trains on `train` under the variant's layout and precision, then codes
/// `test` with the result and with the block family.
pub fn ablation_run(
    train: &Corpus,
    test: &Corpus,
    variant: AblationVariant,
    config: &CodecConfig,
    options: &TrainingOptions,
) -> Result<AblationReport, CodecError> {
    ablation_run_with(train, test, variant, config, options, &SerialMoments)
}

/// [`ablation_run`] with training moments from `source`.
pub fn ablation_run_with(
    train: &Corpus,
    test: &Corpus,
    variant: AblationVariant,
    config: &CodecConfig,
    options: &TrainingOptions,
    source: &dyn MomentSource,
) -> Result<AblationReport, CodecError> {
    let options = TrainingOptions {
        layout: variant.layout(),
        shift: variant.shift,
        ..*options
    };
    let training = iterate_mse_training_with(train, config, &options, source)?;
    let weights = training.quantized(variant.shift, &config.weights)?;
    let three_tap = CodecConfig {
        family: PredictorFamily::ThreeTap,
        weights: weights.clone(),
        ..config.clone()
    };
    let block = CodecConfig {
        family: PredictorFamily::Block,
        ..config.clone()
    };
    let mut rows = Vec::with_capacity(test.len());
    for (label, plane) in test.iter() {
        let block_bits = coded_bits(&encode_plane(plane, &block)?.1);
        let bits = coded_bits(&encode_plane(plane, &three_tap)?.1);
        rows.push(AblationRow {
            label: String::from(label),
            block_bits,
            bits,
            reduction_percent: percent_reduction(block_bits, bits),
        });
    }
    let average_reduction = rows.iter().map(|r| r.reduction_percent).sum::<f64>() / rows.len().max(1) as f64;
    let total_block_bits = rows.iter().map(|r| r.block_bits).sum();
    let total_bits = rows.iter().map(|r| r.bits).sum();
    Ok(AblationReport {
        variant,
        weights,
        training,
        rows,
        average_reduction,
        total_block_bits,
        total_bits,
    })
}
