//! Quasi-static 2×1 Rayleigh fading, Alamouti combining to the equivalent
//! scalar channel Ỹ = X + Z with Z | H ∼ 𝒩_c(0, N₀/H), and the seeded,
//! chunk-parallel Monte Carlo codeword-error-rate simulator.

use crate::lattice::{Lattice2D, VoronoiConstellation};
use crate::rng::{chunk_len, chunk_rng, complex_normal, salt, DEFAULT_CHUNKS};
use crate::stbc::CodebookSpec;
use crate::{Error, Result};
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use std::collections::HashMap;

/// One quasi-static realization of the two fading coefficients.
#[derive(Clone, Copy, Debug)]
pub struct ChannelRealization {
    pub h1: Complex64,
    pub h2: Complex64,
}

impl ChannelRealization {
    /// Draws h₁, h₂ i.i.d. circularly-symmetric complex normal with unit
    /// variance, making the combined gain H ∼ Γ(2, 1).
    pub fn sample<R: Rng>(rng: &mut R) -> Self {
        ChannelRealization { h1: complex_normal(rng), h2: complex_normal(rng) }
    }

    /// Combined gain H = |h₁|² + |h₂|².
    pub fn gain(&self) -> f64 {
        self.h1.norm_sqr() + self.h2.norm_sqr()
    }
}

/// Matched-filter Alamouti combining of the two received samples
/// (y₁, y₂) = (h₁x₀ + h₂x₁ + z₁, −h₁x₁* + h₂x₀* + z₂), normalized by H so
/// that ỹ_j = x_j + z̃_j with z̃_j | H ∼ 𝒩_c(0, N₀/H) and z̃₀ ⊥ z̃₁.
pub fn combine(y1: Complex64, y2: Complex64, ch: &ChannelRealization) -> Result<(Complex64, Complex64)> {
    let h = ch.gain();
    if h <= 0.0 {
        return Err(Error::Degenerate("zero channel gain; resample the channel".into()));
    }
    let y2c = y2.conj();
    Ok((
        (ch.h1.conj() * y1 + ch.h2 * y2c) / h,
        (ch.h2.conj() * y1 - ch.h1 * y2c) / h,
    ))
}

/// Monte Carlo configuration: SNR is E_s/N₀ per complex symbol with
/// E_s = 1 after constellation normalization, so N₀ = 10^(−snr_db/10).
#[derive(Clone, Copy, Debug)]
pub struct SimConfig {
    pub snr_db: f64,
    pub trials: u64,
    pub seed: u64,
    pub chunk_count: u32,
}

impl SimConfig {
    pub fn new(snr_db: f64, trials: u64, seed: u64) -> Result<Self> {
        SimConfig { snr_db, trials, seed, chunk_count: DEFAULT_CHUNKS }.validated()
    }

    pub fn with_chunks(mut self, chunk_count: u32) -> Result<Self> {
        self.chunk_count = chunk_count;
        self.validated()
    }

    fn validated(self) -> Result<Self> {
        if !self.snr_db.is_finite() {
            return Err(Error::invalid("snr_db must be finite"));
        }
        if self.trials < 1 {
            return Err(Error::invalid("trials must be >= 1"));
        }
        if self.chunk_count < 1 {
            return Err(Error::invalid("chunk_count must be >= 1"));
        }
        Ok(self)
    }

    pub fn n0(&self) -> f64 {
        10f64.powf(-self.snr_db / 10.0)
    }
}

/// A measured codeword error rate with its Wilson 95% interval.
#[derive(Clone, Copy, Debug)]
pub struct CerResult {
    pub errors: u64,
    pub trials: u64,
    pub cer: f64,
    pub wilson_ci95: (f64, f64),
}

/// Wilson score 95% confidence interval for a binomial proportion.
pub fn wilson_ci(errors: u64, trials: u64) -> (f64, f64) {
    const Z: f64 = 1.959963984540054;
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z * ((p * (1.0 - p) + z2 / (4.0 * n)) / n).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Exact maximum-likelihood nearest-point decoder for a Voronoi
/// constellation on the combined scalar channel.
///
/// Fast path: quantize y/scale to the nearest *lattice* point; when that
/// point is a constellation label it is necessarily the nearest
/// constellation point (the constellation is a subset of the lattice).
/// Otherwise fall back to a linear scan.
#[derive(Clone, Debug)]
pub struct NearestDecoder {
    lattice: Lattice2D,
    scale: f64,
    index: HashMap<(i64, i64), usize>,
    positions: Vec<Complex64>,
}

impl NearestDecoder {
    pub fn new(c: &VoronoiConstellation) -> Self {
        let index = c
            .points()
            .iter()
            .enumerate()
            .map(|(i, p)| (p.label, i))
            .collect();
        NearestDecoder {
            lattice: c.ring().lattice(),
            scale: c.scale(),
            index,
            positions: c.positions(),
        }
    }

    /// Index of the nearest constellation point (smallest index on exact
    /// float ties, for determinism).
    pub fn decode(&self, y: Complex64) -> usize {
        let lam = self.lattice.quantize(y / self.scale);
        if let Some(&i) = self.index.get(&lam) {
            return i;
        }
        let mut best = 0usize;
        let mut best_d = f64::INFINITY;
        for (i, p) in self.positions.iter().enumerate() {
            let d = (y - p).norm_sqr();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }
}

fn run_cer_chunk(
    decoder: &NearestDecoder,
    positions: &[Complex64],
    cfg: &SimConfig,
    chunk: u32,
) -> u64 {
    let mut rng = chunk_rng(cfg.seed, salt::CER, chunk);
    let n = chunk_len(cfg.trials, cfg.chunk_count, chunk);
    let m = positions.len();
    let noise_sd = cfg.n0().sqrt();
    let mut errors = 0u64;
    for _ in 0..n {
        // Pinned per-trial draw order: idx0, idx1, h₁, h₂, z₁, z₂.
        let idx0 = rng.gen_range(0..m);
        let idx1 = rng.gen_range(0..m);
        let mut ch = ChannelRealization::sample(&mut rng);
        while ch.gain() <= 0.0 {
            ch = ChannelRealization::sample(&mut rng);
        }
        let z1 = complex_normal(&mut rng) * noise_sd;
        let z2 = complex_normal(&mut rng) * noise_sd;
        let (x0, x1) = (positions[idx0], positions[idx1]);
        let y1 = ch.h1 * x0 + ch.h2 * x1 + z1;
        let y2 = -ch.h1 * x1.conj() + ch.h2 * x0.conj() + z2;
        let (t0, t1) = combine(y1, y2, &ch).expect("positive gain ensured above");
        if decoder.decode(t0) != idx0 || decoder.decode(t1) != idx1 {
            errors += 1;
        }
    }
    errors
}

/// Per-chunk error counts for `cfg.trials` Monte Carlo trials, split over
/// `cfg.chunk_count` independent substreams. The returned vector is in
/// chunk order and is bitwise reproducible for fixed (seed, chunk_count),
/// independent of thread count.
pub fn simulate_cer_chunks(spec: &CodebookSpec, cfg: &SimConfig) -> Result<Vec<u64>> {
    cfg.validated()?;
    let decoder = NearestDecoder::new(spec.constellation());
    let positions = spec.constellation().positions();
    Ok((0..cfg.chunk_count)
        .into_par_iter()
        .map(|chunk| run_cer_chunk(&decoder, &positions, cfg, chunk))
        .collect())
}

/// Monte Carlo codeword error rate under ML symbol-wise decoding:
/// a trial errs when either symbol of the block decodes wrong.
pub fn simulate_cer(spec: &CodebookSpec, cfg: &SimConfig) -> Result<CerResult> {
    let errors: u64 = simulate_cer_chunks(spec, cfg)?.iter().sum();
    Ok(CerResult {
        errors,
        trials: cfg.trials,
        cer: errors as f64 / cfg.trials as f64,
        wilson_ci95: wilson_ci(errors, cfg.trials),
    })
}
