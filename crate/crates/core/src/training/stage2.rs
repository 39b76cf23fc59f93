use alloc::vec::Vec;

use crate::codec::{encode_plane, CodecConfig, CodecError, EncodeStats, PredictorFamily, HEADER_BITS};
use crate::plane::Corpus;
use crate::prediction::WeightTable;

/// The six ±1 transfers tried for a slot, in evaluation order.
pub const CANDIDATE_MOVES: [[i32; 3]; 6] = [
    [1, -1, 0],
    [-1, 1, 0],
    [1, 0, -1],
    [-1, 0, 1],
    [0, 1, -1],
    [0, -1, 1],
];

/// Measures corpus bitrates for candidate tables.
pub trait BitrateOracle {
    /// Total corpus bits under `base` with each table substituted, in order.
    fn corpus_bits(
        &self,
        corpus: &Corpus,
        base: &CodecConfig,
        tables: &[WeightTable],
    ) -> Result<Vec<u64>, CodecError>;
}

/// Encodes candidates one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct SerialOracle;

impl BitrateOracle for SerialOracle {
    fn corpus_bits(
        &self,
        corpus: &Corpus,
        base: &CodecConfig,
        tables: &[WeightTable],
    ) -> Result<Vec<u64>, CodecError> {
        tables
            .iter()
            .map(|t| corpus_bits(corpus, &base.clone().with_weights(t.clone())))
            .collect()
    }
}

/// Stream bits of one plane as if the weight table were compiled in, so
/// tables are compared on prediction alone.
pub fn coded_bits(stats: &EncodeStats) -> u64 {
    stats.total_bits - (stats.header_bits - HEADER_BITS)
}

/// Sum of [`coded_bits`] over the corpus.
pub fn corpus_bits(corpus: &Corpus, config: &CodecConfig) -> Result<u64, CodecError> {
    let mut bits = 0;
    for plane in corpus.planes() {
        bits += coded_bits(&encode_plane(plane, config)?.1);
    }
    Ok(bits)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adoption {
    pub sweep: usize,
    pub slot: usize,
    /// Index into [`CANDIDATE_MOVES`].
    pub candidate: usize,
    pub before: [i32; 3],
    pub after: [i32; 3],
    pub bits_before: u64,
    pub bits_after: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refinement {
    pub weights: WeightTable,
    /// Corpus bits of the input table, then after every adoption.
    pub b_opt: Vec<u64>,
    pub adoptions: Vec<Adoption>,
    pub sweeps: usize,
    /// Candidate encodes of the whole corpus.
    pub evaluations: u64,
}

impl Refinement {
    pub fn initial_bits(&self) -> u64 {
        self.b_opt[0]
    }

    pub fn final_bits(&self) -> u64 {
        *self.b_opt.last().expect("initial bits recorded")
    }
}

/// Coordinate descent on the corpus bitrate, sweeping until a full pass
/// over the slots adopts nothing.
pub fn refine_for_bitrate(
    weights: &WeightTable,
    corpus: &Corpus,
    config: &CodecConfig,
    oracle: &dyn BitrateOracle,
) -> Result<Refinement, CodecError> {
    refine_with_limit(weights, corpus, config, oracle, usize::MAX)
}

/// [`refine_for_bitrate`] stopping after at most `max_sweeps` sweeps.
///
/// Each slot tries the candidates that keep the table valid; the best one is
/// adopted only when it lowers the current best bitrate. Ties go to the
/// earlier candidate.
pub fn refine_with_limit(
    weights: &WeightTable,
    corpus: &Corpus,
    config: &CodecConfig,
    oracle: &dyn BitrateOracle,
    max_sweeps: usize,
) -> Result<Refinement, CodecError> {
    let base = CodecConfig {
        family: PredictorFamily::ThreeTap,
        ..config.clone()
    };
    let mut table = weights.clone();
    let first = oracle.corpus_bits(corpus, &base, core::slice::from_ref(&table))?;
    let mut b_opt = first[0];
    let mut out = Refinement {
        weights: table.clone(),
        b_opt: alloc::vec![b_opt],
        adoptions: Vec::new(),
        sweeps: 0,
        evaluations: 1,
    };
    while out.sweeps < max_sweeps {
        out.sweeps += 1;
        let b_best = b_opt;
        for slot in 0..table.slot_count() {
            let current = table.slot_triple(slot);
            let mut ids = Vec::with_capacity(CANDIDATE_MOVES.len());
            let mut tables = Vec::with_capacity(CANDIDATE_MOVES.len());
            for (i, m) in CANDIDATE_MOVES.iter().enumerate() {
                let t = [current[0] + m[0], current[1] + m[1], current[2] + m[2]];
                if let Ok(candidate) = table.with_slot(slot, t) {
                    ids.push(i);
                    tables.push(candidate);
                }
            }
            if tables.is_empty() {
                continue;
            }
            let bits = oracle.corpus_bits(corpus, &base, &tables)?;
            out.evaluations += bits.len() as u64;
            let mut best = 0;
            for i in 1..bits.len() {
                if bits[i] < bits[best] {
                    best = i;
                }
            }
            if bits[best] < b_opt {
                let next = tables.swap_remove(best);
                out.adoptions.push(Adoption {
                    sweep: out.sweeps,
                    slot,
                    candidate: ids[best],
                    before: current,
                    after: next.slot_triple(slot),
                    bits_before: b_opt,
                    bits_after: bits[best],
                });
                b_opt = bits[best];
                out.b_opt.push(b_opt);
                table = next;
            }
        }
        if b_opt >= b_best {
            break;
        }
    }
    out.weights = table;
    Ok(out)
}
