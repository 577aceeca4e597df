//! Alamouti codeword construction for both rings, orthogonality and
//! determinant identities, exhaustive minimum-determinant search, the
//! pairwise-error-probability determinant bound, and the union-bound
//! codeword-error approximation.

use crate::algebra::ComplexMatrix2;
use crate::lattice::{DistanceSpectrum, Ring, VoronoiConstellation};
use crate::{Error, Result};
use num_complex::Complex64;

/// The 2×2 Alamouti codeword carrying two complex symbols.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlamoutiCodeword {
    pub x0: Complex64,
    pub x1: Complex64,
}

impl AlamoutiCodeword {
    pub fn encode(x0: Complex64, x1: Complex64) -> Self {
        AlamoutiCodeword { x0, x1 }
    }

    /// The orthogonal-design matrix ((x₀, −x₁*), (x₁, x₀*)).
    pub fn matrix(&self) -> ComplexMatrix2 {
        ComplexMatrix2::new([
            [self.x0, -self.x1.conj()],
            [self.x1, self.x0.conj()],
        ])
    }

    /// Codeword energy |x₀|² + |x₁|²; equals det(matrix) and the scalar of
    /// matrix†·matrix.
    pub fn energy(&self) -> f64 {
        self.x0.norm_sqr() + self.x1.norm_sqr()
    }

    /// Symbol-wise difference; Alamouti codewords are closed under
    /// differences (linear STBC).
    pub fn difference(&self, other: &AlamoutiCodeword) -> AlamoutiCodeword {
        AlamoutiCodeword::encode(self.x0 - other.x0, self.x1 - other.x1)
    }
}

/// A full Alamouti codebook over a constellation 𝒳: all |𝒳|² symbol pairs.
#[derive(Clone, Debug)]
pub struct CodebookSpec {
    constellation: VoronoiConstellation,
    spectrum: Option<DistanceSpectrum>,
}

impl CodebookSpec {
    pub fn new(constellation: VoronoiConstellation) -> Self {
        let spectrum = DistanceSpectrum::from_constellation(&constellation).ok();
        CodebookSpec { constellation, spectrum }
    }

    /// Spec with an explicitly imposed symbol spectrum, so what-if
    /// comparisons can hold Δ_min and the union-bound constant fixed
    /// across codebooks (the "same C" hypothesis of the shaping-gain
    /// proposition).
    pub fn with_spectrum(constellation: VoronoiConstellation, spectrum: DistanceSpectrum) -> Self {
        CodebookSpec { constellation, spectrum: Some(spectrum) }
    }

    pub fn constellation(&self) -> &VoronoiConstellation {
        &self.constellation
    }

    /// Number of codewords |𝒳|².
    pub fn cardinality(&self) -> usize {
        self.constellation.len() * self.constellation.len()
    }

    /// Symbol-level distance spectrum; `None` for single-point
    /// constellations.
    pub fn spectrum(&self) -> Option<&DistanceSpectrum> {
        self.spectrum.as_ref()
    }

    /// Minimum squared block distance Δ_min = min ‖ΔX‖²_F over distinct
    /// codewords; equals the constellation's squared minimum distance
    /// (nearest codewords differ in exactly one symbol).
    pub fn min_block_distance_sq(&self) -> f64 {
        let d = self.constellation.min_distance();
        d * d
    }

    /// The union-bound constant C: the constellation's average multiplicity
    /// of minimum-distance neighbors, N̄₁.
    pub fn union_bound_constant(&self) -> f64 {
        self.spectrum.as_ref().map_or(0.0, |s| s.min_multiplicity())
    }
}

/// Result of the exhaustive minimum-determinant search.
#[derive(Clone, Copy, Debug)]
pub struct MinDeterminant {
    /// min det(ΔX ΔX†) = (N(x₀)+N(x₁))² over the searched nonzero pairs.
    pub value: i128,
    /// Whether the search box provably contains the global minimizer: any
    /// pair with a coordinate outside the box has determinant at least the
    /// coercivity bound, which must not undercut `value`.
    pub exhaustive: bool,
}

fn min_determinant_impl(ring: Ring, search_radius: u32, both_nonzero: bool) -> Result<MinDeterminant> {
    if search_radius < 1 {
        return Err(Error::invalid("min_determinant search radius must be >= 1"));
    }
    let r = i64::from(search_radius);
    let mut best: Option<i128> = None;
    for u0 in -r..=r {
        for v0 in -r..=r {
            let n0 = ring.norm((u0, v0));
            for u1 in -r..=r {
                for v1 in -r..=r {
                    let n1 = ring.norm((u1, v1));
                    if n0 + n1 == 0 {
                        continue;
                    }
                    if both_nonzero && (n0 == 0 || n1 == 0) {
                        continue;
                    }
                    let det = (n0 + n1) * (n0 + n1);
                    if best.map_or(true, |b| det < b) {
                        best = Some(det);
                    }
                }
            }
        }
    }
    let value = best.expect("nonempty search box");
    // Coordinate coercivity: N(u, v) ≥ (3/4)·max(u², v²) for ℤ[w] (from
    // N = (u + v/2)² + (3/4)v² and symmetry) and N ≥ max(u², v²) for ℤ[i],
    // so any pair reaching outside the box has det ≥ bound² with
    // bound = (3/4)(r+1)² resp. (r+1)².
    let b = i128::from(r) + 1;
    let exhaustive = match ring {
        Ring::Gaussian => value <= b.pow(4),
        Ring::Eisenstein => 16 * value <= 9 * b.pow(4),
    };
    Ok(MinDeterminant { value, exhaustive })
}

/// Exhaustive δ_min = min_{X≠0} det(XX†) over codeword differences with
/// symbol coordinates bounded by `search_radius` at unit lattice spacing.
pub fn min_determinant(ring: Ring, search_radius: u32) -> Result<MinDeterminant> {
    min_determinant_impl(ring, search_radius, false)
}

/// Variant restricted to differences with both symbols nonzero.
pub fn min_determinant_both_nonzero(ring: Ring, search_radius: u32) -> Result<MinDeterminant> {
    min_determinant_impl(ring, search_radius, true)
}

/// Coding-gain normalization δ_min^(1/n_t) with n_t = 2.
pub fn coding_gain(delta_min: f64) -> f64 {
    delta_min.sqrt()
}

/// Pairwise-error determinant bound det[I + ΔXΔX†/(4N₀)]^(−n_r), which for
/// Alamouti differences scalarizes to (1 + Δ/(4N₀))^(−2·n_r) with
/// Δ = |Δx₀|² + |Δx₁|².
pub fn pep_determinant_bound(delta: &AlamoutiCodeword, n0: f64, n_r: u32) -> Result<f64> {
    if !(n0 > 0.0) {
        return Err(Error::invalid("noise level n0 must be positive"));
    }
    if n_r < 1 {
        return Err(Error::invalid("receive antenna count must be >= 1"));
    }
    Ok((1.0 + delta.energy() / (4.0 * n0)).powi(-2 * n_r as i32))
}

/// Dominant-term union-bound approximation of the codeword error rate,
/// C·(1 + Δ_min·SNR/(4E_s))⁻², with C the average minimum-distance
/// multiplicity. An approximation, not a bound.
pub fn union_bound_cer(spec: &CodebookSpec, snr_db: f64) -> Result<f64> {
    if !snr_db.is_finite() {
        return Err(Error::invalid("snr_db must be finite"));
    }
    if spec.spectrum().is_none() {
        return Ok(0.0);
    }
    let snr = 10f64.powf(snr_db / 10.0);
    let es = spec.constellation().avg_energy();
    let arg = 1.0 + spec.min_block_distance_sq() * snr / (4.0 * es);
    Ok(spec.union_bound_constant() * arg.powi(-2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::EisensteinInteger;

    #[test]
    fn encode_examples() {
        let id = AlamoutiCodeword::encode(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        assert_eq!(id.matrix(), ComplexMatrix2::identity());
        let m = AlamoutiCodeword::encode(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)).matrix();
        assert_eq!(m.m[0][1], Complex64::new(-1.0, 0.0));
        assert_eq!(m.m[1][0], Complex64::new(1.0, 0.0));

        let w = EisensteinInteger::w();
        let one_minus_w = EisensteinInteger::new(1, -1);
        let cw = AlamoutiCodeword::encode(w.embed(), one_minus_w.embed());
        assert!((cw.matrix().det() - Complex64::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn orthogonality_identity() {
        let cw = AlamoutiCodeword::encode(Complex64::new(0.3, -1.2), Complex64::new(-0.7, 0.4));
        let g = cw.matrix().adjoint().mul(&cw.matrix());
        let e = cw.energy();
        assert!((g.m[0][0] - Complex64::new(e, 0.0)).norm() < 1e-12);
        assert!((g.m[1][1] - Complex64::new(e, 0.0)).norm() < 1e-12);
        assert!(g.m[0][1].norm() < 1e-12);
        assert!(g.m[1][0].norm() < 1e-12);
        assert!((cw.matrix().det() - Complex64::new(e, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn min_determinant_is_one_with_coverage() {
        for ring in [Ring::Eisenstein, Ring::Gaussian] {
            let res = min_determinant(ring, 3).unwrap();
            assert_eq!(res.value, 1);
            assert!(res.exhaustive);
        }
        let both = min_determinant_both_nonzero(Ring::Eisenstein, 3).unwrap();
        assert_eq!(both.value, 4);
        assert!(both.exhaustive);
        assert!(min_determinant(Ring::Gaussian, 0).is_err());
        assert!((coding_gain(1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pep_bound_examples() {
        let zero = AlamoutiCodeword::encode(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        assert_eq!(pep_determinant_bound(&zero, 1.0, 1).unwrap(), 1.0);
        let d = AlamoutiCodeword::encode(Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0));
        assert!((pep_determinant_bound(&d, 1.0, 1).unwrap() - 0.25).abs() < 1e-15);
        let one = pep_determinant_bound(&d, 1.0, 1).unwrap();
        let two = pep_determinant_bound(&d, 1.0, 2).unwrap();
        assert!((two - one * one).abs() < 1e-15);
        assert!(pep_determinant_bound(&d, 0.0, 1).is_err());
    }

    #[test]
    fn union_bound_decays_and_is_monotone() {
        let spec = CodebookSpec::new(VoronoiConstellation::build(Ring::Eisenstein, 13).unwrap());
        assert_eq!(spec.cardinality(), 169 * 169);
        let at_30 = union_bound_cer(&spec, 30.0).unwrap();
        let at_40 = union_bound_cer(&spec, 40.0).unwrap();
        let at_80 = union_bound_cer(&spec, 80.0).unwrap();
        assert!(at_30 > at_40 && at_40 > at_80);
        assert!(at_80 < 1e-6);
        assert!(union_bound_cer(&spec, f64::NAN).is_err());

        let single = CodebookSpec::new(VoronoiConstellation::build(Ring::Gaussian, 1).unwrap());
        assert_eq!(union_bound_cer(&single, 20.0).unwrap(), 0.0);
    }
}
