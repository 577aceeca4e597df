//! Constellation-constrained mutual information, high-SNR MI
//! approximations, the asymptotic MI gap, channel dispersion, and the
//! finite-blocklength normal approximation.
//!
//! All Monte Carlo estimators follow the chunked-deterministic contract of
//! the channel module: fixed (seed, chunk count) gives bitwise-identical
//! results on any thread count. Rates are base-2 in the public API; the
//! internals work in nats with a single conversion.

use crate::lattice::{
    epstein_zeta, DistanceSpectrum, LatticeKind, Ring, VoronoiConstellation,
};
use crate::rng::{chunk_len, chunk_rng, complex_normal, pairwise_sum, salt, DEFAULT_CHUNKS};
use crate::{Error, Result};
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use std::f64::consts::LN_2;

pub use crate::special::{q_function, q_inverse};

/// Monte Carlo estimate of the mutual information, bits per complex symbol.
#[derive(Clone, Copy, Debug)]
pub struct MiEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
    pub snr_db: f64,
}

/// Monte Carlo estimate of the per-symbol dispersion V (bits²), with the
/// law-of-total-variance components and the mean information density as a
/// cross-check on the direct MI estimator.
#[derive(Clone, Copy, Debug)]
pub struct DispersionEstimate {
    pub v: f64,
    pub stderr: f64,
    /// E[Var(i | H)] component.
    pub e_var_given_h: f64,
    /// Var(E[i | H]) component (enters V with the block factor 2).
    pub var_e_given_h: f64,
    /// Grand mean of the information density (should match the MI).
    pub i_mean: f64,
    pub i_stderr: f64,
}

/// One evaluated point of a normal-approximation ε–R curve.
#[derive(Clone, Copy, Debug)]
pub struct FblPoint {
    /// Blocklength in complex symbols (n = 2m Alamouti blocks).
    pub n: u32,
    /// Rate in bits per complex symbol.
    pub rate: f64,
    pub epsilon: f64,
    pub i_used: f64,
    pub v_used: f64,
}

/// Conditional density p(y | x, H) = (H/(πN₀))·exp(−H|y−x|²/N₀) of the
/// combined scalar channel.
pub fn cond_density(y: Complex64, x: Complex64, h: f64, n0: f64) -> Result<f64> {
    if !(h > 0.0) || !(n0 > 0.0) {
        return Err(Error::invalid("cond_density requires H > 0 and n0 > 0"));
    }
    Ok(h / (std::f64::consts::PI * n0) * (-h * (y - x).norm_sqr() / n0).exp())
}

/// Conditional information density i(x; y | H) in bits for the uniform
/// input x = positions[x_index]:
/// log₂ [ p(y|x,H) / ((1/M) Σ_j p(y|x_j,H)) ].
///
/// Computed in the log domain with max subtraction; the density prefactors
/// cancel, and the value is ≤ log₂ M exactly because the sum includes the
/// transmitted point.
pub fn information_density(
    positions: &[Complex64],
    x_index: usize,
    y: Complex64,
    h: f64,
    n0: f64,
) -> f64 {
    let scale = -h / n0;
    let e_x = scale * (y - positions[x_index]).norm_sqr();
    let mut mx = f64::NEG_INFINITY;
    for p in positions {
        let e = scale * (y - p).norm_sqr();
        if e > mx {
            mx = e;
        }
    }
    let mut sum = 0.0;
    for p in positions {
        let t = scale * (y - p).norm_sqr() - mx;
        // exp underflows to exactly 0 below −745; skipping is bit-identical.
        if t > -745.0 {
            sum += t.exp();
        }
    }
    let lse = mx + sum.ln();
    (e_x - lse + (positions.len() as f64).ln()) / LN_2
}

fn mi_chunk(
    positions: &[Complex64],
    snr_db: f64,
    samples: u64,
    seed: u64,
    chunks: u32,
    chunk: u32,
) -> (f64, f64) {
    let mut rng = chunk_rng(seed, salt::MI, chunk);
    let n = chunk_len(samples, chunks, chunk);
    let n0 = 10f64.powf(-snr_db / 10.0);
    let m = positions.len();
    let (mut s1, mut s2) = (0.0, 0.0);
    for _ in 0..n {
        // Pinned draw order: h₁, h₂, symbol index, scalar noise.
        let mut h1 = complex_normal(&mut rng);
        let mut h2 = complex_normal(&mut rng);
        while h1.norm_sqr() + h2.norm_sqr() <= 0.0 {
            h1 = complex_normal(&mut rng);
            h2 = complex_normal(&mut rng);
        }
        let h = h1.norm_sqr() + h2.norm_sqr();
        let idx = rng.gen_range(0..m);
        let z = complex_normal(&mut rng) * (n0 / h).sqrt();
        let i = information_density(positions, idx, positions[idx] + z, h, n0);
        s1 += i;
        s2 += i * i;
    }
    (s1, s2)
}

/// Monte Carlo estimate of Eq.-(3)-style mutual information of the scalar
/// channel, averaging the information density over (H, X, Ỹ).
pub fn mutual_information(
    c: &VoronoiConstellation,
    snr_db: f64,
    samples: u64,
    seed: u64,
) -> Result<MiEstimate> {
    if samples < 2 {
        return Err(Error::invalid("mutual_information requires samples >= 2"));
    }
    if !snr_db.is_finite() {
        return Err(Error::invalid("snr_db must be finite"));
    }
    let positions = c.positions();
    let chunks = DEFAULT_CHUNKS;
    let partials: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|k| mi_chunk(&positions, snr_db, samples, seed, chunks, k))
        .collect();
    let s1: Vec<f64> = partials.iter().map(|p| p.0).collect();
    let s2: Vec<f64> = partials.iter().map(|p| p.1).collect();
    let n = samples as f64;
    let mean = pairwise_sum(&s1) / n;
    let var = (pairwise_sum(&s2) / n - mean * mean).max(0.0);
    Ok(MiEstimate { mean, stderr: (var / n).sqrt(), samples, snr_db })
}

fn dispersion_chunk(
    positions: &[Complex64],
    snr_db: f64,
    h_samples: u64,
    per_h_samples: u32,
    seed: u64,
    chunks: u32,
    chunk: u32,
) -> Vec<(f64, f64)> {
    let mut rng = chunk_rng(seed, salt::DISPERSION, chunk);
    let k = chunk_len(h_samples, chunks, chunk);
    let n0 = 10f64.powf(-snr_db / 10.0);
    let m = positions.len();
    let per = per_h_samples as f64;
    let mut out = Vec::with_capacity(k as usize);
    for _ in 0..k {
        let mut h1 = complex_normal(&mut rng);
        let mut h2 = complex_normal(&mut rng);
        while h1.norm_sqr() + h2.norm_sqr() <= 0.0 {
            h1 = complex_normal(&mut rng);
            h2 = complex_normal(&mut rng);
        }
        let h = h1.norm_sqr() + h2.norm_sqr();
        let (mut s1, mut s2) = (0.0, 0.0);
        for _ in 0..per_h_samples {
            let idx = rng.gen_range(0..m);
            let z = complex_normal(&mut rng) * (n0 / h).sqrt();
            let i = information_density(positions, idx, positions[idx] + z, h, n0);
            s1 += i;
            s2 += i * i;
        }
        let mean = s1 / per;
        // Unbiased conditional variance (divides by per − 1).
        let var = ((s2 - per * mean * mean) / (per - 1.0)).max(0.0);
        out.push((mean, var));
    }
    out
}

/// Monte Carlo estimate of the per-symbol dispersion
/// V = E[Var(i|H)] + 2·Var(E[i|H]) (the factor 2 is the block weighting of
/// the shared fading state): outer loop over H ∼ Γ(2,1), inner loop over
/// (X, Ỹ) given H. The standard error combines both components' fourth
/// moments, including their covariance.
pub fn dispersion(
    c: &VoronoiConstellation,
    snr_db: f64,
    h_samples: u64,
    per_h_samples: u32,
    seed: u64,
) -> Result<DispersionEstimate> {
    if per_h_samples < 2 {
        return Err(Error::invalid("dispersion requires per_h_samples >= 2"));
    }
    if h_samples < 2 {
        return Err(Error::invalid("dispersion requires h_samples >= 2"));
    }
    if !snr_db.is_finite() {
        return Err(Error::invalid("snr_db must be finite"));
    }
    let positions = c.positions();
    let chunks = DEFAULT_CHUNKS;
    let per_chunk: Vec<Vec<(f64, f64)>> = (0..chunks)
        .into_par_iter()
        .map(|k| dispersion_chunk(&positions, snr_db, h_samples, per_h_samples, seed, chunks, k))
        .collect();
    let mut means = Vec::with_capacity(h_samples as usize);
    let mut vars = Vec::with_capacity(h_samples as usize);
    for chunk in per_chunk {
        for (m, v) in chunk {
            means.push(m);
            vars.push(v);
        }
    }
    let k = means.len() as f64;
    let i_mean = pairwise_sum(&means) / k;
    let dev2: Vec<f64> = means.iter().map(|m| (m - i_mean) * (m - i_mean)).collect();
    let var_e_given_h = pairwise_sum(&dev2) / (k - 1.0);
    let e_var_given_h = pairwise_sum(&vars) / k;
    let v = e_var_given_h + 2.0 * var_e_given_h;
    // Delta method: V̂ is the mean of c_j = s²_j + 2·(K/(K−1))·(m_j − m̄)²,
    // so Var(V̂) ≈ sample-variance(c)/K (covers both terms and their
    // covariance).
    let cs: Vec<f64> = vars
        .iter()
        .zip(&dev2)
        .map(|(s2, d2)| s2 + 2.0 * d2 * k / (k - 1.0))
        .collect();
    let c_mean = pairwise_sum(&cs) / k;
    let c_dev2: Vec<f64> = cs.iter().map(|x| (x - c_mean) * (x - c_mean)).collect();
    let c_var = pairwise_sum(&c_dev2) / (k - 1.0);
    Ok(DispersionEstimate {
        v,
        stderr: (c_var / k).sqrt(),
        e_var_given_h,
        var_e_given_h,
        i_mean,
        i_stderr: (var_e_given_h / k).sqrt(),
    })
}

/// Eq.-(4)-style high-SNR MI deficit approximation in bits:
/// log₂|𝒞| − I ≈ (1/ln2) Σ_r N_r (1 + SNR·d_r²/E_s)⁻².
pub fn mi_high_snr_deficit(c: &VoronoiConstellation, snr_db: f64) -> Result<f64> {
    if !snr_db.is_finite() {
        return Err(Error::invalid("snr_db must be finite"));
    }
    let spectrum = DistanceSpectrum::from_constellation(c)?;
    let snr = 10f64.powf(snr_db / 10.0);
    let es = c.avg_energy();
    let sum: f64 = spectrum
        .entries()
        .iter()
        .map(|e| e.multiplicity * (1.0 + snr * e.distance * e.distance / es).powi(-2))
        .sum();
    Ok(sum / LN_2)
}

/// The asymptotic SNR gap in dB from an energy ratio and a fourth-power
/// spectrum (zeta) ratio: 10·log₁₀(E ratio) + 5·log₁₀(ζ ratio).
pub fn mi_gap_from_parts(es_ratio: f64, zeta_ratio: f64) -> Result<f64> {
    if !(es_ratio > 0.0 && zeta_ratio > 0.0) {
        return Err(Error::invalid("ratios must be positive"));
    }
    Ok(10.0 * es_ratio.log10() + 5.0 * zeta_ratio.log10())
}

/// Asymptotic MI-based SNR gap between the square and hexagonal Alamouti
/// constellations: 10·log₁₀(6/5) + 5·log₁₀(ζ_{ℤ²}(2)/ζ_{A₂}(2)), with the
/// zeta values summed at radius 2000.
pub fn mi_gap_asymptotic() -> Result<f64> {
    let zs = epstein_zeta(LatticeKind::Square, 2000)?;
    let zh = epstein_zeta(LatticeKind::Hex, 2000)?;
    mi_gap_from_parts(6.0 / 5.0, zs / zh)
}

fn check_fbl_domain(v: f64, n: u32) -> Result<()> {
    if !(v >= 0.0) {
        return Err(Error::invalid("dispersion v must be >= 0"));
    }
    if n < 2 || n % 2 != 0 {
        return Err(Error::invalid("blocklength n must be even and >= 2"));
    }
    Ok(())
}

/// Normal-approximation achievable rate R ≈ I − √(V/n)·Q⁻¹(p_e) in bits
/// per complex symbol (the O(log n/n) term is omitted).
pub fn fbl_rate(i: f64, v: f64, n: u32, p_e: f64) -> Result<f64> {
    check_fbl_domain(v, n)?;
    Ok(i - (v / n as f64).sqrt() * q_inverse(p_e)?)
}

/// Normal-approximation error probability ε ≈ Q(√n·(I − R)/√V); with
/// V = 0 the approximation degenerates to a step function at R = I.
pub fn fbl_epsilon(i: f64, v: f64, n: u32, rate: f64) -> Result<f64> {
    check_fbl_domain(v, n)?;
    if v == 0.0 {
        return Ok(if rate < i {
            0.0
        } else if rate > i {
            1.0
        } else {
            0.5
        });
    }
    Ok(q_function((n as f64).sqrt() * (i - rate) / v.sqrt()))
}

/// Monte Carlo configuration for an ε–R curve.
#[derive(Clone, Debug)]
pub struct CurveConfig {
    pub snr_db: f64,
    pub n_list: Vec<u32>,
    pub rate_grid: Vec<f64>,
    pub mi_samples: u64,
    pub h_samples: u64,
    pub per_h_samples: u32,
    pub seed: u64,
}

impl CurveConfig {
    /// Reference-figure defaults: 22 dB, n ∈ {128, 256, 512, 1024}, rate grid
    /// 6.00:7.40:0.02, MC sizes 2×10⁶ / 2×10⁴×200.
    pub fn standard(seed: u64) -> Self {
        let rate_grid = (0..=70).map(|k| 6.0 + 0.02 * k as f64).collect();
        CurveConfig {
            snr_db: 22.0,
            n_list: vec![128, 256, 512, 1024],
            rate_grid,
            mi_samples: 2_000_000,
            h_samples: 20_000,
            per_h_samples: 200,
            seed,
        }
    }
}

/// The ε–R table for one ring: the shared (I, V) estimates and one
/// [`FblPoint`] per (n, rate) pair.
#[derive(Clone, Debug)]
pub struct RingCurve {
    pub ring: Ring,
    pub snr_db: f64,
    pub mi: MiEstimate,
    pub dispersion: DispersionEstimate,
    pub points: Vec<FblPoint>,
}

/// Computes (I, V) once for the constellation, then evaluates the normal
/// approximation over the (n, rate) grid.
pub fn epsilon_rate_curve(c: &VoronoiConstellation, cfg: &CurveConfig) -> Result<RingCurve> {
    let mi = mutual_information(c, cfg.snr_db, cfg.mi_samples, cfg.seed)?;
    let disp = dispersion(c, cfg.snr_db, cfg.h_samples, cfg.per_h_samples, cfg.seed)?;
    let mut points = Vec::with_capacity(cfg.n_list.len() * cfg.rate_grid.len());
    for &n in &cfg.n_list {
        for &rate in &cfg.rate_grid {
            points.push(FblPoint {
                n,
                rate,
                epsilon: fbl_epsilon(mi.mean, disp.v, n, rate)?,
                i_used: mi.mean,
                v_used: disp.v,
            });
        }
    }
    Ok(RingCurve { ring: c.ring(), snr_db: cfg.snr_db, mi, dispersion: disp, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cond_density_peak_and_decay() {
        let x = Complex64::new(0.3, -0.4);
        let peak = cond_density(x, x, 2.0, 0.1).unwrap();
        assert!((peak - 2.0 / (std::f64::consts::PI * 0.1)).abs() < 1e-12);
        // One sigma out: |y − x|² = n0/H.
        let y = x + Complex64::new((0.1f64 / 2.0).sqrt(), 0.0);
        let one_sigma = cond_density(y, x, 2.0, 0.1).unwrap();
        assert!((one_sigma - peak / std::f64::consts::E).abs() < 1e-12);
        assert!(cond_density(x, x, 0.0, 0.1).is_err());
        assert!(cond_density(x, x, 1.0, 0.0).is_err());
    }

    #[test]
    fn information_density_symmetry_and_limits() {
        let single = [Complex64::new(0.7, 0.0)];
        let i = information_density(&single, 0, Complex64::new(2.0, 1.0), 1.0, 0.1);
        assert_eq!(i, 0.0);

        let pair = [Complex64::new(-0.5, 0.0), Complex64::new(0.5, 0.0)];
        let mid = information_density(&pair, 0, Complex64::new(0.0, 0.0), 1.3, 0.2);
        assert!(mid.abs() < 1e-12);
        // High-confidence limit: y = x and H·d²/n0 large → 1 bit.
        let hi = information_density(&pair, 1, pair[1], 50.0, 1e-3);
        assert!((hi - 1.0).abs() < 1e-9);
        // Pointwise bound i ≤ log₂ M.
        assert!(hi <= 1.0);
    }

    #[test]
    fn fbl_round_trip_and_v0_step() {
        let (i, v, n) = (6.9, 1.62, 256);
        for pe in [0.5, 0.0126, 1e-4] {
            let r = fbl_rate(i, v, n, pe).unwrap();
            let eps = fbl_epsilon(i, v, n, r).unwrap();
            assert!((eps - pe).abs() <= 1e-9 * pe, "pe={pe} round-trip gave {eps}");
        }
        assert_eq!(fbl_rate(i, v, n, 0.5).unwrap(), i);
        assert_eq!(fbl_rate(i, 0.0, n, 0.37).unwrap(), i);
        assert_eq!(fbl_epsilon(i, 0.0, n, 6.0).unwrap(), 0.0);
        assert_eq!(fbl_epsilon(i, 0.0, n, 7.0).unwrap(), 1.0);
        assert_eq!(fbl_epsilon(i, 0.0, n, i).unwrap(), 0.5);
        assert!(fbl_rate(i, v, 255, 0.5).is_err());
        assert!(fbl_rate(i, -1.0, 256, 0.5).is_err());
    }

    #[test]
    fn gap_composition_examples() {
        let shaping_only = mi_gap_from_parts(6.0 / 5.0, 1.0).unwrap();
        assert!((shaping_only - 0.7918124604762482).abs() < 1e-12);
        let zeta_only = mi_gap_from_parts(1.0, 0.7816).unwrap();
        assert!((zeta_only - (-0.5352)).abs() < 5e-4);
        assert!(mi_gap_from_parts(0.0, 1.0).is_err());
    }

    #[test]
    fn single_point_estimators_vanish() {
        let c = VoronoiConstellation::build(Ring::Gaussian, 1).unwrap();
        let mi = mutual_information(&c, 10.0, 2_000, 5).unwrap();
        assert_eq!(mi.mean, 0.0);
        assert_eq!(mi.stderr, 0.0);
        let d = dispersion(&c, 10.0, 200, 8, 5).unwrap();
        assert_eq!(d.v, 0.0);
        assert!((d.v - (d.e_var_given_h + 2.0 * d.var_e_given_h)).abs() < 1e-12);
    }

    #[test]
    fn curve_is_monotone_in_rate_and_n() {
        let c = VoronoiConstellation::build(Ring::Eisenstein, 3).unwrap();
        let mut cfg = CurveConfig::standard(11);
        cfg.snr_db = 10.0;
        cfg.n_list = vec![128, 512];
        cfg.rate_grid = vec![1.5, 2.0, 2.5];
        cfg.mi_samples = 20_000;
        cfg.h_samples = 500;
        cfg.per_h_samples = 20;
        let curve = epsilon_rate_curve(&c, &cfg).unwrap();
        assert_eq!(curve.points.len(), 6);
        // ε nondecreasing in rate at fixed n.
        assert!(curve.points[0].epsilon <= curve.points[1].epsilon);
        assert!(curve.points[1].epsilon <= curve.points[2].epsilon);
        // For rate below I, larger n reduces ε.
        if curve.mi.mean > 1.5 {
            assert!(curve.points[3].epsilon <= curve.points[0].epsilon);
        }
    }
}
