//! Offline 3-tap weight training.
//!
//! Stage one alternates encoding and per-slot least squares; stage two
//! nudges the quantized table by ±1 transfers while the corpus bitrate drops.

mod ablation;
mod moments;
mod quantize;
mod solve;
mod stage1;
mod stage2;

pub use ablation::{ablation_run, ablation_run_with, percent_reduction, AblationReport, AblationRow, AblationVariant};
pub use moments::{accumulate_moments, plane_moments, CorpusEncode, MomentAccumulator, MomentSet};
pub use quantize::{quantize_triple, quantize_weights, RealTable};
pub use solve::{
    condition_number, solve_3x3, solve_normal_equations, solve_with_threshold, SolveError,
    MAX_CONDITION, MIN_SAMPLES,
};
pub use stage1::{
    iterate_mse_training, iterate_mse_training_with, solve_moments, IterationRecord, MomentSource,
    SerialMoments, TrainingOptions, TrainingRun,
};
pub use stage2::{
    coded_bits, corpus_bits, refine_for_bitrate, refine_with_limit, Adoption, BitrateOracle, Refinement,
    SerialOracle, CANDIDATE_MOVES,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::CodecConfig;
    use crate::plane::{Corpus, Plane};
    use crate::prediction::{SlotLayout, WeightTable};
    use alloc::vec;

    fn textured(seed: u32, size: usize) -> Plane {
        let mut s = seed;
        Plane::from_fn(size, size, 8, |x, y| {
            s = s.wrapping_mul(1_103_515_245).wrapping_add(12_345);
            let noise = (s >> 16) % 9;
            (((x * 3 + y * 5) % 200) as u32 + noise) as u16
        })
        .unwrap()
    }

    #[test]
    fn constant_corpus_converges_at_once() {
        let corpus = Corpus::unlabeled(vec![Plane::filled(32, 32, 8, 90).unwrap()]).unwrap();
        let run = iterate_mse_training(&corpus, &CodecConfig::default(), &TrainingOptions::default()).unwrap();
        assert!(run.converged);
        assert_eq!(run.iterations.len(), 1);
        assert_eq!(run.iterations[0].solved_slots, 0);
        let q = run.quantized(5, &WeightTable::shipped()).unwrap();
        assert_eq!(q, WeightTable::shipped());
    }

    #[test]
    fn training_is_deterministic() {
        let corpus = Corpus::unlabeled(vec![textured(1, 48), textured(2, 48)]).unwrap();
        let opts = TrainingOptions {
            min_samples: 50,
            max_iterations: 3,
            ..TrainingOptions::default()
        };
        let a = iterate_mse_training(&corpus, &CodecConfig::default(), &opts).unwrap();
        let b = iterate_mse_training(&corpus, &CodecConfig::default(), &opts).unwrap();
        assert_eq!(a, b);
        assert!(a.iterations[0].solved_slots > 0);
    }

    #[test]
    fn moments_count_every_pixel() {
        let plane = textured(3, 32);
        let corpus = Corpus::unlabeled(vec![plane]).unwrap();
        let (m, e) = accumulate_moments(&corpus, &CodecConfig::default(), SlotLayout::SHIPPED).unwrap();
        assert_eq!(m.slots().len(), 19);
        assert_eq!(m.total_count(), e.pixels);
    }

    #[test]
    fn refinement_never_worsens() {
        let corpus = Corpus::unlabeled(vec![textured(4, 32)]).unwrap();
        let r = refine_with_limit(&WeightTable::shipped(), &corpus, &CodecConfig::default(), &SerialOracle, 1)
            .unwrap();
        assert!(r.b_opt.windows(2).all(|w| w[1] < w[0]));
        assert!(r.final_bits() <= r.initial_bits());
        for a in &r.adoptions {
            let d = [a.after[0] - a.before[0], a.after[1] - a.before[1], a.after[2] - a.before[2]];
            assert_eq!(d, CANDIDATE_MOVES[a.candidate]);
        }
    }
}
