//! Deterministic random-number plumbing.
//!
//! All Monte Carlo estimators in this crate partition their work into a
//! fixed number of chunks. Each chunk draws from its own ChaCha substream,
//! derived from the user seed, a per-purpose salt, and the chunk index.
//! Results are then reduced in chunk order, so the outcome depends only on
//! `(seed, chunk_count)` — never on how many threads executed the chunks.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Default number of Monte Carlo chunks. Fixed (rather than derived from
/// the worker count) so that results are invariant under `--threads`.
pub const DEFAULT_CHUNKS: u32 = 64;

/// Stream salts separating the samplers of different estimators, so that
/// e.g. a CER run and an MI run with the same seed do not share draws.
pub mod salt {
    pub const CER: u64 = 0x01;
    pub const MI: u64 = 0x02;
    pub const DISPERSION: u64 = 0x03;
    pub const GENERIC: u64 = 0x7f;
}

/// RNG for one chunk of one estimator: ChaCha12 keyed by the seed, with
/// the 64-bit stream id packing `(salt, chunk)`.
pub fn chunk_rng(seed: u64, salt: u64, chunk: u32) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream((salt << 32) | u64::from(chunk));
    rng
}

/// Draws a circularly-symmetric complex Gaussian with unit total variance
/// (0.5 per real component), via the polar transform.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    // 1 - U keeps the argument of ln() in (0, 1].
    let u: f64 = rng.gen::<f64>();
    let radius = (-(1.0 - u).ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
    Complex64::from_polar(radius, theta)
}

/// Splits `total` work items into `chunks` near-equal spans; chunk `i`
/// receives `total/chunks` items plus one of the remainder items.
pub fn chunk_len(total: u64, chunks: u32, index: u32) -> u64 {
    let base = total / u64::from(chunks);
    let rem = total % u64::from(chunks);
    base + u64::from(u64::from(index) < rem)
}

/// Sums a slice pairwise, bounding floating-point drift independent of
/// the slice length. Used for cross-chunk reductions.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => pairwise_sum(&values[..n / 2]) + pairwise_sum(&values[n / 2..]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunk_lengths_partition_total() {
        for total in [0u64, 1, 63, 64, 65, 1_000_003] {
            let sum: u64 = (0..DEFAULT_CHUNKS).map(|i| chunk_len(total, DEFAULT_CHUNKS, i)).sum();
            assert_eq!(sum, total);
        }
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let mut a = chunk_rng(7, salt::CER, 3);
        let mut b = chunk_rng(7, salt::CER, 3);
        let mut c = chunk_rng(7, salt::CER, 4);
        let (xa, xb, xc): (u64, u64, u64) = (a.gen(), b.gen(), c.gen());
        assert_eq!(xa, xb);
        assert_ne!(xa, xc);
    }

    #[test]
    fn complex_normal_has_unit_power() {
        let mut rng = chunk_rng(1, salt::GENERIC, 0);
        let n = 200_000;
        let mean_sq: f64 = (0..n).map(|_| complex_normal(&mut rng).norm_sqr()).sum::<f64>() / n as f64;
        assert!((mean_sq - 1.0).abs() < 0.01, "mean |z|^2 = {mean_sq}");
    }

    #[test]
    fn pairwise_sum_matches_naive_on_small_inputs() {
        let xs = [1.5, -2.25, 3.0, 0.125, 10.0];
        assert_eq!(pairwise_sum(&xs), 12.375);
    }
}
