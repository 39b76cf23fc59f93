//! Thread-pool drivers.

use ilc_core::codec::{CodecConfig, CodecError};
use ilc_core::prediction::SlotLayout;
use ilc_core::training::{coded_bits, plane_moments, BitrateOracle, CorpusEncode, MomentSet, MomentSource};
use ilc_core::{encode_plane, Corpus, WeightTable};
use rayon::prelude::*;

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "ILC_THREADS";

/// `ILC_THREADS` when set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

pub fn thread_pool(threads: Option<usize>) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.or_else(threads_from_env).unwrap_or(0))
        .build()
        .expect("thread pool")
}

/// Encodes every (candidate, plane) pair concurrently. Sums are formed in a
/// fixed order, so results do not depend on scheduling.
pub struct ParallelOracle {
    pool: rayon::ThreadPool,
}

impl ParallelOracle {
    pub fn new(threads: Option<usize>) -> Self {
        ParallelOracle { pool: thread_pool(threads) }
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        self.pool.install(f)
    }
}

impl Default for ParallelOracle {
    fn default() -> Self {
        ParallelOracle::new(None)
    }
}

impl BitrateOracle for ParallelOracle {
    fn corpus_bits(
        &self,
        corpus: &Corpus,
        base: &CodecConfig,
        tables: &[WeightTable],
    ) -> Result<Vec<u64>, CodecError> {
        let configs: Vec<CodecConfig> = tables.iter().map(|t| base.clone().with_weights(t.clone())).collect();
        let n = corpus.len();
        let bits: Vec<u64> = self.pool.install(|| {
            (0..configs.len() * n)
                .into_par_iter()
                .map(|i| encode_plane(&corpus.planes()[i % n], &configs[i / n]).map(|(_, s)| coded_bits(&s)))
                .collect::<Result<_, _>>()
        })?;
        Ok(bits.chunks(n).map(|c| c.iter().sum()).collect())
    }
}

impl MomentSource for ParallelOracle {
    fn moments(
        &self,
        corpus: &Corpus,
        config: &CodecConfig,
        layout: SlotLayout,
    ) -> Result<(MomentSet, CorpusEncode), CodecError> {
        let parts = self.pool.install(|| {
            corpus
                .planes()
                .par_iter()
                .map(|p| plane_moments(p, config, layout))
                .collect::<Result<Vec<_>, _>>()
        })?;
        let mut moments = MomentSet::new(layout);
        let mut total = CorpusEncode::default();
        for (m, e) in parts {
            moments.merge(&m);
            total.bits += e.bits;
            total.sse += e.sse;
            total.pixels += e.pixels;
            total.per_plane_bits.extend(e.per_plane_bits);
        }
        Ok((moments, total))
    }
}
