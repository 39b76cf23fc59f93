use super::bits::{BitReader, BitWriter, Truncated};

/// Largest Rice parameter.
pub const MAX_K: u32 = 15;
/// Unary prefix length that switches to a fixed-length escape.
pub const UNARY_LIMIT: u32 = 24;
/// Running statistics are halved when the count reaches this value.
pub const RESET_COUNT: u32 = 64;

/// Adaptive state of one residual context.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct RiceContext {
    sum: u32,
    count: u32,
}

impl RiceContext {
    pub const fn new() -> Self {
        RiceContext { sum: 0, count: 0 }
    }

    /// Smallest `k` with `count << k >= sum`, capped at [`MAX_K`].
    #[inline]
    pub fn k(&self) -> u32 {
        let (count, sum) = (self.count as u64, self.sum as u64);
        (0..MAX_K).find(|&k| count << k >= sum).unwrap_or(MAX_K)
    }

    #[inline]
    pub fn count(&self) -> u32 {
        self.count
    }

    #[inline]
    pub fn sum(&self) -> u32 {
        self.sum
    }

    #[inline]
    fn update(&mut self, magnitude: u32) {
        self.sum += magnitude;
        self.count += 1;
        if self.count >= RESET_COUNT {
            self.sum >>= 1;
            self.count >>= 1;
        }
    }
}

/// Maps 0, -1, 1, -2, 2, ... to 0, 1, 2, 3, 4, ...
#[inline]
pub fn zigzag(v: i32) -> u32 {
    ((v << 1) ^ (v >> 31)) as u32
}

#[inline]
pub fn unzigzag(m: u32) -> i32 {
    ((m >> 1) as i32) ^ -((m & 1) as i32)
}

/// Golomb-Rice residual coder for one bit depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RiceCoder {
    escape_bits: u32,
}

impl RiceCoder {
    /// Residuals satisfy `|r| < 2^bit_depth`, so mapped values fit
    /// `bit_depth + 1` bits.
    pub fn new(bit_depth: u8) -> Self {
        RiceCoder {
            escape_bits: bit_depth as u32 + 1,
        }
    }

    /// Coder for residuals whose zigzag mapping fits `bits` bits.
    pub fn with_escape_bits(bits: u32) -> Self {
        debug_assert!((1..=32).contains(&bits));
        RiceCoder { escape_bits: bits }
    }

    #[inline]
    pub fn escape_bits(&self) -> u32 {
        self.escape_bits
    }

    #[inline]
    fn code_len(&self, m: u32, k: u32) -> u32 {
        let q = m >> k;
        if q < UNARY_LIMIT {
            q + 1 + k
        } else {
            UNARY_LIMIT + self.escape_bits
        }
    }

    pub fn encode(&self, value: i32, ctx: &mut RiceContext, sink: &mut BitWriter) {
        let m = zigzag(value);
        debug_assert!(m >> self.escape_bits == 0, "residual {value} out of range");
        let k = ctx.k();
        let q = m >> k;
        if q < UNARY_LIMIT {
            sink.write_ones(q);
            sink.write_bit(false);
            sink.write_bits(m & ((1 << k) - 1), k);
        } else {
            sink.write_ones(UNARY_LIMIT);
            sink.write_bits(m, self.escape_bits);
        }
        ctx.update(value.unsigned_abs());
    }

    pub fn decode(&self, ctx: &mut RiceContext, src: &mut BitReader<'_>) -> Result<i32, Truncated> {
        let k = ctx.k();
        let q = src.read_unary(UNARY_LIMIT)?;
        let m = if q < UNARY_LIMIT {
            (q << k) | src.read_bits(k)?
        } else {
            src.read_bits(self.escape_bits)?
        };
        let value = unzigzag(m);
        ctx.update(value.unsigned_abs());
        Ok(value)
    }

    /// Bits `encode` would emit for `value`; advances `ctx` the same way.
    #[inline]
    pub fn cost(&self, value: i32, ctx: &mut RiceContext) -> u32 {
        let bits = self.code_len(zigzag(value), ctx.k());
        ctx.update(value.unsigned_abs());
        bits
    }

    /// Exact bit count of coding `residuals` in order from `ctx`, leaving
    /// the caller's context untouched.
    pub fn measure_bits(&self, residuals: &[i32], ctx: &RiceContext) -> u64 {
        let mut scratch = *ctx;
        residuals.iter().map(|&r| self.cost(r, &mut scratch) as u64).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Context primed so that `k()` returns `k`.
    fn ctx_with_k(k: u32) -> RiceContext {
        let c = RiceContext { sum: 1 << k, count: 1 };
        assert_eq!(c.k(), k);
        c
    }

    #[test]
    fn zigzag_order() {
        let mapped: Vec<u32> = [0, -1, 1, -2, 2].into_iter().map(zigzag).collect();
        assert_eq!(mapped, [0, 1, 2, 3, 4]);
        for v in -1024..=1024 {
            assert_eq!(unzigzag(zigzag(v)), v);
        }
    }

    #[test]
    fn zero_at_k0_is_one_bit() {
        let coder = RiceCoder::new(8);
        let mut ctx = RiceContext::new();
        assert_eq!(ctx.k(), 0);
        let mut w = BitWriter::new();
        coder.encode(0, &mut ctx, &mut w);
        assert_eq!(w.bit_len(), 1);
        assert_eq!(ctx.count(), 1);
        assert_eq!(w.finish(), [0]);
    }

    #[test]
    fn exhaustive_round_trip_all_k() {
        let coder = RiceCoder::new(8);
        for k in 0..=MAX_K {
            for v in -255..=255 {
                let mut enc = ctx_with_k(k);
                let mut w = BitWriter::new();
                coder.encode(v, &mut enc, &mut w);
                let bits = w.bit_len();
                let mut cost_ctx = ctx_with_k(k);
                assert_eq!(coder.cost(v, &mut cost_ctx) as u64, bits);
                let bytes = w.finish();
                let mut dec = ctx_with_k(k);
                let mut r = BitReader::new(&bytes);
                assert_eq!(coder.decode(&mut dec, &mut r), Ok(v), "k {k} v {v}");
                assert_eq!(dec, enc);
                assert_eq!(cost_ctx, enc);
            }
        }
    }

    #[test]
    fn escape_bounds_code_length() {
        let coder = RiceCoder::new(8);
        let mut ctx = RiceContext::new();
        assert_eq!(coder.cost(-255, &mut ctx), UNARY_LIMIT + 9);
        let coder10 = RiceCoder::new(10);
        assert_eq!(coder10.cost(1023, &mut RiceContext::new()), UNARY_LIMIT + 11);
    }

    #[test]
    fn k_tracks_mean_magnitude() {
        let mut ctx = RiceContext::new();
        for _ in 0..40 {
            ctx.update(20);
        }
        // 40 << 4 = 640 < 800 <= 40 << 5
        assert_eq!(ctx.k(), 5);
        for _ in 0..200 {
            ctx.update(0);
        }
        assert_eq!(ctx.k(), 0);
        assert!(ctx.count() < RESET_COUNT);
    }

    #[test]
    fn truncated_stream_is_an_error() {
        let coder = RiceCoder::new(8);
        let mut w = BitWriter::new();
        let mut ctx = ctx_with_k(6);
        coder.encode(200, &mut ctx, &mut w);
        let bytes = w.finish();
        let mut r = BitReader::new(&bytes[..1]);
        assert_eq!(coder.decode(&mut ctx_with_k(6), &mut r), Err(Truncated));
        let mut r = BitReader::new(&[]);
        assert_eq!(coder.decode(&mut RiceContext::new(), &mut r), Err(Truncated));
    }

    #[test]
    fn measure_bits_does_not_mutate_and_matches_writer() {
        let coder = RiceCoder::new(8);
        let block = [0, 3, -7, 12, 0, 0, 1, -1, 40, -90, 2, 2, 0, 5, -5, 6];
        let ctx = ctx_with_k(2);
        let measured = coder.measure_bits(&block, &ctx);
        let mut live = ctx;
        let mut w = BitWriter::new();
        for &v in &block {
            coder.encode(v, &mut live, &mut w);
        }
        assert_eq!(measured, w.bit_len());
        assert_eq!(ctx, ctx_with_k(2));
        assert_eq!(coder.measure_bits(&[0; 16], &RiceContext::new()), 16);
    }

    #[test]
    fn order_changes_cost_through_adaptation() {
        let coder = RiceCoder::new(8);
        let a = [0, 0, 0, 0, 0, 0, 0, 100];
        let b = [100, 0, 0, 0, 0, 0, 0, 0];
        let ca = coder.measure_bits(&a, &RiceContext::new());
        let cb = coder.measure_bits(&b, &RiceContext::new());
        // Same multiset, different adaptive state along the way.
        assert_ne!(ca, cb);
    }

    /// Two-sided geometric source P(v) ∝ θ^|v| over |v| <= 255.
    fn tsg_pmf(theta: f64) -> Vec<(i32, f64)> {
        let mut pmf: Vec<(i32, f64)> = (-255..=255).map(|v: i32| (v, theta.powi(v.abs()))).collect();
        let z: f64 = pmf.iter().map(|p| p.1).sum();
        for p in &mut pmf {
            p.1 /= z;
        }
        pmf
    }

    #[test]
    fn adaptive_rate_near_best_static_rice_code() {
        let coder = RiceCoder::new(8);
        for theta in [0.5f64, 0.8, 0.9, 0.95] {
            let pmf = tsg_pmf(theta);
            let entropy: f64 = pmf.iter().filter(|p| p.1 > 0.0).map(|p| -p.1 * p.1.log2()).sum();
            let best_static = (0..=MAX_K)
                .map(|k| pmf.iter().map(|&(v, p)| p * coder.code_len(zigzag(v), k) as f64).sum::<f64>())
                .fold(f64::INFINITY, f64::min);
            // Inverse-CDF sampling with a seeded generator.
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let mut cdf = Vec::with_capacity(pmf.len());
            let mut acc = 0.0;
            for &(v, p) in &pmf {
                acc += p;
                cdf.push((acc, v));
            }
            let n = 200_000;
            let samples: Vec<i32> = (0..n)
                .map(|_| {
                    let u: f64 = rng.gen();
                    cdf.iter().find(|c| c.0 >= u).map_or(255, |c| c.1)
                })
                .collect();
            let mean = coder.measure_bits(&samples, &RiceContext::new()) as f64 / n as f64;
            assert!(mean >= entropy - 0.01, "θ={theta}: {mean} below entropy {entropy}");
            assert!(
                mean <= best_static + 0.1,
                "θ={theta}: adaptive {mean} vs best Rice {best_static} (entropy {entropy})"
            );
        }
    }

    proptest! {
        #[test]
        fn sequences_round_trip(values in proptest::collection::vec(-1023i32..=1023, 0..300)) {
            let coder = RiceCoder::new(10);
            let mut ctx = RiceContext::new();
            let mut w = BitWriter::new();
            for &v in &values {
                coder.encode(v, &mut ctx, &mut w);
            }
            let bits = w.bit_len();
            prop_assert_eq!(coder.measure_bits(&values, &RiceContext::new()), bits);
            let bytes = w.finish();
            let mut r = BitReader::new(&bytes);
            let mut dctx = RiceContext::new();
            for &v in &values {
                prop_assert_eq!(coder.decode(&mut dctx, &mut r).unwrap(), v);
            }
            prop_assert_eq!(dctx, ctx);
        }
    }
}
