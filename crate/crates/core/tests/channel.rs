//! Channel-layer verification: fading statistics, combining noise
//! statistics, symbol-wise vs joint ML equivalence, frozen CER anchors,
//! and the union-bound sanity band.

use eal_core::channel::{
    combine, simulate_cer, simulate_cer_chunks, wilson_ci, ChannelRealization, NearestDecoder,
    SimConfig,
};
use eal_core::lattice::{Ring, VoronoiConstellation};
use eal_core::rng::{chunk_rng, complex_normal, salt};
use eal_core::stbc::{union_bound_cer, CodebookSpec};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn channel_gain_is_chi_squared_with_four_degrees() {
    let mut rng = chunk_rng(9001, salt::GENERIC, 0);
    let n = 1_000_000u32;
    let (mut sum, mut sum_sq, mut sum_h1) = (0.0, 0.0, 0.0);
    for _ in 0..n {
        let ch = ChannelRealization::sample(&mut rng);
        let h = ch.gain();
        sum += h;
        sum_sq += h * h;
        sum_h1 += ch.h1.norm_sqr();
    }
    let mean = sum / n as f64;
    let var = sum_sq / n as f64 - mean * mean;
    // H = |h₁|²+|h₂|² ~ Γ(2,1): mean 2, variance 2; each |h_i|² has mean 1.
    assert!((mean - 2.0).abs() < 0.01, "E[H] = {mean}");
    assert!((var - 2.0).abs() < 0.02, "Var[H] = {var}");
    assert!((sum_h1 / n as f64 - 1.0).abs() < 0.01);
}

#[test]
fn combining_is_exact_without_noise_and_scales_noise_by_gain() {
    let mut rng = chunk_rng(9002, salt::GENERIC, 0);
    let ch = ChannelRealization::sample(&mut rng);
    let (x0, x1) = (Complex64::new(0.6, -0.2), Complex64::new(-1.1, 0.4));
    // Noiseless: combining returns H·x exactly up to float roundoff.
    let y1 = ch.h1 * x0 + ch.h2 * x1;
    let y2 = -ch.h1 * x1.conj() + ch.h2 * x0.conj();
    let (t0, t1) = combine(y1, y2, &ch).unwrap();
    assert!((t0 - x0).norm() < 1e-12 && (t1 - x1).norm() < 1e-12);

    // With noise only: per-branch combined noise has variance N₀/H and the
    // two branches are uncorrelated.
    let n0 = 0.3f64;
    let n = 100_000u32;
    let (mut e0, mut e1) = (0.0, 0.0);
    let mut cross = Complex64::new(0.0, 0.0);
    for _ in 0..n {
        let z1 = complex_normal(&mut rng) * n0.sqrt();
        let z2 = complex_normal(&mut rng) * n0.sqrt();
        let (n0c, n1c) = combine(z1, z2, &ch).unwrap();
        e0 += n0c.norm_sqr();
        e1 += n1c.norm_sqr();
        cross += n0c * n1c.conj();
    }
    let target = n0 / ch.gain();
    let v0 = e0 / n as f64;
    let v1 = e1 / n as f64;
    assert!((v0 / target - 1.0).abs() < 0.03, "branch-0 variance ratio {}", v0 / target);
    assert!((v1 / target - 1.0).abs() < 0.03, "branch-1 variance ratio {}", v1 / target);
    let corr = (cross / n as f64).norm() / target;
    assert!(corr < 0.01, "cross-correlation {corr}");
}

#[test]
fn combine_rejects_zero_gain() {
    let ch = ChannelRealization { h1: Complex64::new(0.0, 0.0), h2: Complex64::new(0.0, 0.0) };
    assert!(combine(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), &ch).is_err());
}

#[test]
fn symbolwise_decisions_match_joint_ml() {
    // With 9 points the joint codebook has 81 codewords — small enough to
    // enumerate the joint ML metric directly in the channel domain.
    let c = VoronoiConstellation::build(Ring::Eisenstein, 3).unwrap();
    let decoder = NearestDecoder::new(&c);
    let pos = c.positions();
    let n0 = 10f64.powf(-1.0); // 10 dB
    let mut rng = chunk_rng(9003, salt::GENERIC, 0);
    for _ in 0..10_000 {
        let i0 = rng.gen_range(0..pos.len());
        let i1 = rng.gen_range(0..pos.len());
        let ch = ChannelRealization::sample(&mut rng);
        if ch.gain() <= 0.0 {
            continue;
        }
        let y1 = ch.h1 * pos[i0] + ch.h2 * pos[i1] + complex_normal(&mut rng) * n0.sqrt();
        let y2 = -ch.h1 * pos[i1].conj()
            + ch.h2 * pos[i0].conj()
            + complex_normal(&mut rng) * n0.sqrt();
        // Symbol-wise: combine then decode each branch independently.
        let (t0, t1) = combine(y1, y2, &ch).unwrap();
        let s0 = decoder.decode(t0);
        let s1 = decoder.decode(t1);
        // Joint ML over all 81 codewords on the raw observations.
        let (mut best, mut arg) = (f64::INFINITY, (0, 0));
        for (j0, &p0) in pos.iter().enumerate() {
            for (j1, &p1) in pos.iter().enumerate() {
                let m1 = y1 - (ch.h1 * p0 + ch.h2 * p1);
                let m2 = y2 - (-ch.h1 * p1.conj() + ch.h2 * p0.conj());
                let metric = m1.norm_sqr() + m2.norm_sqr();
                if metric < best {
                    best = metric;
                    arg = (j0, j1);
                }
            }
        }
        assert_eq!((s0, s1), arg, "symbol-wise and joint ML disagree");
    }
}

#[test]
fn cer_matches_frozen_anchors_and_union_bound_band() {
    // Frozen Monte Carlo anchors at 34 dB (independent implementation,
    // 10⁶ trials); the tolerance covers ~6 binomial standard errors for
    // both estimates.
    let anchors = [(Ring::Eisenstein, 0.0017625), (Ring::Gaussian, 0.0020995)];
    for (ring, frozen) in anchors {
        let spec = CodebookSpec::new(VoronoiConstellation::build(ring, 13).unwrap());
        let cfg = SimConfig::new(34.0, 1_000_000, 7).unwrap();
        let res = simulate_cer(&spec, &cfg).unwrap();
        assert!(
            (res.cer - frozen).abs() < 2.5e-4,
            "{ring:?}: measured {} vs frozen {frozen}",
            res.cer
        );
        assert!(res.wilson_ci95.0 <= res.cer && res.cer <= res.wilson_ci95.1);
        // The dominant-term union bound sits within [0.2×, 5×] of the
        // measurement at this operating point.
        let ub = union_bound_cer(&spec, 34.0).unwrap();
        let ratio = res.cer / ub;
        assert!((0.2..=5.0).contains(&ratio), "{ring:?}: measured/bound ratio {ratio}");
    }
}

#[test]
fn cer_is_monotone_in_snr() {
    let spec = CodebookSpec::new(VoronoiConstellation::build(Ring::Eisenstein, 13).unwrap());
    let mut prev = f64::INFINITY;
    for snr_db in [30.0, 33.0, 36.0] {
        let cfg = SimConfig::new(snr_db, 200_000, 11).unwrap();
        let cer = simulate_cer(&spec, &cfg).unwrap().cer;
        assert!(cer < prev, "CER not decreasing at {snr_db} dB: {cer} vs {prev}");
        prev = cer;
    }
}

#[test]
fn simulation_is_bitwise_reproducible_and_chunk_consistent() {
    let spec = CodebookSpec::new(VoronoiConstellation::build(Ring::Gaussian, 13).unwrap());
    let cfg = SimConfig::new(30.0, 40_000, 99).unwrap();
    let a = simulate_cer(&spec, &cfg).unwrap();
    let b = simulate_cer(&spec, &cfg).unwrap();
    assert_eq!(a.errors, b.errors);
    assert_eq!(a.cer, b.cer);
    let chunks = simulate_cer_chunks(&spec, &cfg).unwrap();
    assert_eq!(chunks.iter().sum::<u64>(), a.errors);
    // A different seed gives a different (but again reproducible) draw.
    let cfg2 = SimConfig::new(30.0, 40_000, 100).unwrap();
    let c = simulate_cer(&spec, &cfg2).unwrap();
    assert_eq!(c.errors, simulate_cer(&spec, &cfg2).unwrap().errors);
    assert_ne!(a.errors, c.errors);
}

#[test]
fn decoder_reports_smallest_index_on_degenerate_input() {
    // All positions equidistant from the query: the scan tie-breaks to the
    // smallest index (p = 1 constellation has a single point at 0).
    let c = VoronoiConstellation::build(Ring::Eisenstein, 1).unwrap();
    let d = NearestDecoder::new(&c);
    assert_eq!(d.decode(Complex64::new(5.0, -3.0)), 0);
}

proptest! {
    #[test]
    fn wilson_interval_brackets_the_point_estimate(trials in 1u64..=10_000, frac in 0.0f64..=1.0) {
        let errors = ((trials as f64) * frac).round() as u64;
        let errors = errors.min(trials);
        let (lo, hi) = wilson_ci(errors, trials);
        let p_hat = errors as f64 / trials as f64;
        prop_assert!((0.0..=1.0).contains(&lo));
        prop_assert!((0.0..=1.0).contains(&hi));
        prop_assert!(lo <= p_hat + 1e-12 && p_hat <= hi + 1e-12);
        prop_assert!(lo <= hi);
    }
}
