//! Two-dimensional lattices ℤ² and A₂, nearest-point quantizers,
//! nested-lattice Voronoi constellations, continuous-cell second moments,
//! distance spectra, and Epstein zeta sums.
//!
//! Constellation construction and distance spectra run on exact integer
//! arithmetic (ring norms in 128 bits); floating point appears only in the
//! embedded positions and in the quadrature/zeta helpers.

use crate::algebra::{EisensteinInteger, GaussianInteger, SQRT_3};
use crate::{Error, Result};
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Which translation lattice a [`Lattice2D`] realizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LatticeKind {
    /// ℤ² ≅ ℤ[i].
    Square,
    /// A₂ ≅ ℤ[w].
    Hex,
}

/// The integer ring underlying a constellation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Gaussian,
    Eisenstein,
}

impl Ring {
    pub fn lattice(self) -> Lattice2D {
        match self {
            Ring::Gaussian => Lattice2D::square(),
            Ring::Eisenstein => Lattice2D::hexagonal(),
        }
    }

    /// Exact algebraic norm of a ring element given by its integer
    /// coordinates ((re, im) for ℤ[i], (u, v) in the (1, w) basis for ℤ[w]).
    pub fn norm(self, coords: (i64, i64)) -> i128 {
        match self {
            Ring::Gaussian => GaussianInteger::new(coords.0, coords.1).norm(),
            Ring::Eisenstein => EisensteinInteger::new(coords.0, coords.1).norm(),
        }
    }

    /// Complex embedding of the coordinates (σ for ℤ[w], identity for ℤ[i]).
    pub fn embed(self, coords: (i64, i64)) -> Complex64 {
        match self {
            Ring::Gaussian => GaussianInteger::new(coords.0, coords.1).embed(),
            Ring::Eisenstein => EisensteinInteger::new(coords.0, coords.1).embed(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Ring::Gaussian => "gaussian",
            Ring::Eisenstein => "eisenstein",
        }
    }
}

/// A rank-2 lattice in ℂ ≅ ℝ², described by two generator columns.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lattice2D {
    kind: LatticeKind,
    /// Generator vectors: `basis[0]` = v₁, `basis[1]` = v₂ (each (x, y)).
    basis: [[f64; 2]; 2],
}

impl Lattice2D {
    /// ℤ² with the identity basis.
    pub fn square() -> Self {
        Lattice2D { kind: LatticeKind::Square, basis: [[1.0, 0.0], [0.0, 1.0]] }
    }

    /// A₂ with v₁ = (1, 0), v₂ = (1/2, √3/2); lattice points are exactly the
    /// embedded Eisenstein integers u·v₁ + v·v₂ = σ(u + v·w).
    pub fn hexagonal() -> Self {
        Lattice2D { kind: LatticeKind::Hex, basis: [[1.0, 0.0], [0.5, 0.5 * SQRT_3]] }
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    pub fn basis(&self) -> [[f64; 2]; 2] {
        self.basis
    }

    /// The lattice point with integer coordinates (u, v).
    pub fn point(&self, u: i64, v: i64) -> Complex64 {
        let (v1, v2) = (self.basis[0], self.basis[1]);
        Complex64::new(
            u as f64 * v1[0] + v as f64 * v2[0],
            u as f64 * v1[1] + v as f64 * v2[1],
        )
    }

    /// Real basis coordinates (c₁, c₂) of a point: p = c₁·v₁ + c₂·v₂.
    pub fn coords(&self, p: Complex64) -> (f64, f64) {
        let (v1, v2) = (self.basis[0], self.basis[1]);
        let det = v1[0] * v2[1] - v2[0] * v1[1];
        (
            (v2[1] * p.re - v2[0] * p.im) / det,
            (v1[0] * p.im - v1[1] * p.re) / det,
        )
    }

    /// Nearest lattice point to `p`, as integer coordinates.
    ///
    /// Rounds the basis coordinates and exhaustively compares the 3×3 block
    /// of integer neighbors. For both bases used here the true minimizer's
    /// coordinates differ from the exact basis coordinates by at most
    /// ‖row(B⁻¹)‖·ρ_cov < 1, so the block provably contains it. Distance
    /// ties resolve to the lexicographically smallest (u, v).
    pub fn quantize(&self, p: Complex64) -> (i64, i64) {
        let (c1, c2) = self.coords(p);
        let (r1, r2) = (c1.round() as i64, c2.round() as i64);
        let mut best: Option<(f64, i64, i64)> = None;
        for du in -1..=1 {
            for dv in -1..=1 {
                let (u, v) = (r1 + du, r2 + dv);
                let d2 = (p - self.point(u, v)).norm_sqr();
                let better = match best {
                    None => true,
                    Some((bd, bu, bv)) => d2 < bd || (d2 == bd && (u, v) < (bu, bv)),
                };
                if better {
                    best = Some((d2, u, v));
                }
            }
        }
        let (_, u, v) = best.unwrap();
        (u, v)
    }
}

/// How a constellation's overall scale factor is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Equalization {
    /// Scale to unit average energy (E_s = 1); the standard normalization.
    #[default]
    AverageEnergy,
    /// Scale to unit minimum distance, for equal-d_min comparisons.
    MinDistance,
}

impl Equalization {
    pub fn name(self) -> &'static str {
        match self {
            Equalization::AverageEnergy => "average-energy",
            Equalization::MinDistance => "min-distance",
        }
    }
}

/// One constellation point: the exact coset-representative label and its
/// scaled complex position.
#[derive(Clone, Copy, Debug)]
pub struct ConstellationPoint {
    /// Integer coordinates of the representative in the ring basis.
    pub label: (i64, i64),
    /// Embedded position after scaling.
    pub position: Complex64,
}

/// A Voronoi constellation Λ_f/pΛ_f: the p² coset representatives of the
/// fine lattice modulo p, tie-broken into the Voronoi cell of pΛ_f, then
/// scaled per the chosen [`Equalization`].
#[derive(Clone, Debug)]
pub struct VoronoiConstellation {
    ring: Ring,
    p: u32,
    equalization: Equalization,
    points: Vec<ConstellationPoint>,
    raw_avg_energy: f64,
    scale: f64,
    min_norm_raw: Option<i128>,
}

impl VoronoiConstellation {
    /// Builds the p² -point constellation with the default average-energy
    /// normalization.
    pub fn build(ring: Ring, p: u32) -> Result<Self> {
        Self::build_with(ring, p, Equalization::AverageEnergy)
    }

    pub fn build_with(ring: Ring, p: u32, equalization: Equalization) -> Result<Self> {
        if p == 0 {
            return Err(Error::invalid("constellation scaling p must be >= 1"));
        }
        let pi = i64::from(p);
        let m = (p as usize) * (p as usize);
        let mut labels = Vec::with_capacity(m);
        let mut norm_sum: i128 = 0;
        for lu in 0..pi {
            for lv in 0..pi {
                // The basis coordinates of σ(label)/p are exactly
                // (lu/p, lv/p), so the 3×3 search block around their
                // rounding contains the nearest coarse point p·λ. Norms are
                // exact, and ties pick the lexicographically smallest λ.
                let cu = (lu as f64 / pi as f64).round() as i64;
                let cv = (lv as f64 / pi as f64).round() as i64;
                let mut best: Option<((i128, i64, i64), (i64, i64))> = None;
                for du in -1..=1 {
                    for dv in -1..=1 {
                        let (qu, qv) = (cu + du, cv + dv);
                        let rep = (lu - pi * qu, lv - pi * qv);
                        let key = (ring.norm(rep), qu, qv);
                        if best.as_ref().map_or(true, |(k, _)| key < *k) {
                            best = Some((key, rep));
                        }
                    }
                }
                let ((n, _, _), rep) = best.unwrap();
                norm_sum += n;
                labels.push(rep);
            }
        }
        let raw_avg_energy = norm_sum as f64 / m as f64;
        let mut min_norm_raw: Option<i128> = None;
        for i in 0..labels.len() {
            for j in (i + 1)..labels.len() {
                let d = (labels[i].0 - labels[j].0, labels[i].1 - labels[j].1);
                let n = ring.norm(d);
                if min_norm_raw.map_or(true, |b| n < b) {
                    min_norm_raw = Some(n);
                }
            }
        }
        let scale = match equalization {
            Equalization::AverageEnergy => {
                if raw_avg_energy > 0.0 {
                    1.0 / raw_avg_energy.sqrt()
                } else {
                    1.0
                }
            }
            Equalization::MinDistance => match min_norm_raw {
                Some(n) => 1.0 / (n as f64).sqrt(),
                None => 1.0,
            },
        };
        let points = labels
            .into_iter()
            .map(|label| ConstellationPoint { label, position: ring.embed(label) * scale })
            .collect();
        Ok(VoronoiConstellation {
            ring,
            p,
            equalization,
            points,
            raw_avg_energy,
            scale,
            min_norm_raw,
        })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[ConstellationPoint] {
        &self.points
    }

    pub fn positions(&self) -> Vec<Complex64> {
        self.points.iter().map(|p| p.position).collect()
    }

    pub fn equalization(&self) -> Equalization {
        self.equalization
    }

    /// Average |position|² before scaling (an exact integer over p²).
    pub fn raw_avg_energy(&self) -> f64 {
        self.raw_avg_energy
    }

    /// The factor applied to raw embedded positions.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Average |position|² after scaling (1 under average-energy
    /// equalization for p ≥ 2).
    pub fn avg_energy(&self) -> f64 {
        self.raw_avg_energy * self.scale * self.scale
    }

    /// Minimum inter-point distance after scaling; infinite for p = 1.
    pub fn min_distance(&self) -> f64 {
        match self.min_norm_raw {
            Some(n) => self.scale * (n as f64).sqrt(),
            None => f64::INFINITY,
        }
    }
}

/// One shell of a distance spectrum: a distance and the average number of
/// constellation points at that distance from a reference point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumEntry {
    pub distance: f64,
    pub multiplicity: f64,
}

/// Distances d_r (ascending) with average multiplicities N_r; the
/// multiplicities sum to |𝒞| − 1.
#[derive(Clone, Debug)]
pub struct DistanceSpectrum {
    entries: Vec<SpectrumEntry>,
}

impl DistanceSpectrum {
    /// Exact path: shells grouped by the integer ring norm of label
    /// differences, then mapped through the constellation's scale.
    pub fn from_constellation(c: &VoronoiConstellation) -> Result<Self> {
        if c.len() < 2 {
            return Err(Error::invalid("distance spectrum requires at least 2 points"));
        }
        let mut counts: BTreeMap<i128, u64> = BTreeMap::new();
        let labels: Vec<(i64, i64)> = c.points().iter().map(|p| p.label).collect();
        for (i, a) in labels.iter().enumerate() {
            for (j, b) in labels.iter().enumerate() {
                if i == j {
                    continue;
                }
                let n = c.ring().norm((a.0 - b.0, a.1 - b.1));
                if n == 0 {
                    return Err(Error::invalid("duplicate points in constellation"));
                }
                *counts.entry(n).or_insert(0) += 1;
            }
        }
        let m = c.len() as f64;
        let entries = counts
            .into_iter()
            .map(|(n, count)| SpectrumEntry {
                distance: c.scale() * (n as f64).sqrt(),
                multiplicity: count as f64 / m,
            })
            .collect();
        Ok(DistanceSpectrum { entries })
    }

    /// Tolerance path for raw point sets: pairwise distances grouped at
    /// 10⁻⁹ relative tolerance.
    pub fn from_points(points: &[Complex64]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid("distance spectrum requires at least 2 points"));
        }
        let mut dists = Vec::with_capacity(points.len() * (points.len() - 1));
        for (i, a) in points.iter().enumerate() {
            for (j, b) in points.iter().enumerate() {
                if i != j {
                    dists.push((a - b).norm());
                }
            }
        }
        dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let d_max = *dists.last().unwrap();
        if dists[0] <= 1e-12 * d_max {
            return Err(Error::invalid("duplicate points in point set"));
        }
        let m = points.len() as f64;
        let mut entries: Vec<SpectrumEntry> = Vec::new();
        let mut group: Vec<f64> = vec![dists[0]];
        for &d in &dists[1..] {
            if d - group[0] > 1e-9 * d {
                entries.push(SpectrumEntry {
                    distance: group.iter().sum::<f64>() / group.len() as f64,
                    multiplicity: group.len() as f64 / m,
                });
                group.clear();
            }
            group.push(d);
        }
        entries.push(SpectrumEntry {
            distance: group.iter().sum::<f64>() / group.len() as f64,
            multiplicity: group.len() as f64 / m,
        });
        Ok(DistanceSpectrum { entries })
    }

    /// Builds a spectrum from explicit (distance, multiplicity) shells.
    pub fn from_entries(entries: Vec<(f64, f64)>) -> Result<Self> {
        let mut prev = 0.0;
        for &(d, n) in &entries {
            if !(d > prev) || !(n > 0.0) {
                return Err(Error::invalid(
                    "spectrum entries must have ascending positive distances and positive multiplicities",
                ));
            }
            prev = d;
        }
        if entries.is_empty() {
            return Err(Error::invalid("spectrum must be nonempty"));
        }
        Ok(DistanceSpectrum {
            entries: entries
                .into_iter()
                .map(|(distance, multiplicity)| SpectrumEntry { distance, multiplicity })
                .collect(),
        })
    }

    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    /// Smallest shell distance d₁.
    pub fn min_distance(&self) -> f64 {
        self.entries[0].distance
    }

    /// Average multiplicity N̄₁ of the smallest shell.
    pub fn min_multiplicity(&self) -> f64 {
        self.entries[0].multiplicity
    }

    /// Σ_r N_r; equals |𝒞| − 1 for a full constellation spectrum.
    pub fn total_multiplicity(&self) -> f64 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }
}

/// Fourth-power distance spectrum S(𝒞) = Σ_r N_r / d_r⁴.
pub fn fourth_power_spectrum(s: &DistanceSpectrum) -> f64 {
    s.entries().iter().map(|e| e.multiplicity / e.distance.powi(4)).sum()
}

/// Shaping-cell geometry for second-moment computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellKind {
    /// Centred square of side 2ρ.
    Square,
    /// Regular hexagon with apothem ρ.
    Hexagon,
}

/// Closed-form per-dimension-pair second moment of the cell: (2/3)ρ² for
/// the square, (5/9)ρ² for the hexagon.
pub fn second_moment_continuous(cell: CellKind, rho: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::invalid("cell apothem rho must be positive"));
    }
    Ok(match cell {
        CellKind::Square => 2.0 / 3.0 * rho * rho,
        CellKind::Hexagon => 5.0 / 9.0 * rho * rho,
    })
}

/// Midpoint-rule quadrature of E[‖x‖²] over the cell (independent oracle
/// for [`second_moment_continuous`]); `resolution` is the cell count per
/// axis. Rows span the cell's exact vertical extent and each row's columns
/// span the exact cross-section at the row midpoint, so the rule is second
/// order in 1/resolution on both cells.
pub fn second_moment_numeric(cell: CellKind, rho: f64, resolution: u32) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::invalid("cell apothem rho must be positive"));
    }
    if resolution < 64 {
        return Err(Error::invalid("quadrature resolution must be >= 64"));
    }
    // Vertical half-extent: ρ for the square, the circumradius 2ρ/√3 for
    // the hexagon (apothem directions at 0°, 60°, 120°; topmost vertex on
    // the y axis).
    let half_height = match cell {
        CellKind::Square => rho,
        CellKind::Hexagon => 2.0 * rho / SQRT_3,
    };
    // Half-width of the cross-section at height y.
    let half_width = |y: f64| match cell {
        CellKind::Square => rho,
        CellKind::Hexagon => rho.min(2.0 * rho - SQRT_3 * y.abs()).max(0.0),
    };
    let dy = 2.0 * half_height / resolution as f64;
    let mut sum = 0.0;
    let mut area = 0.0;
    for i in 0..resolution {
        let y = -half_height + (i as f64 + 0.5) * dy;
        let w = half_width(y);
        if w <= 0.0 {
            continue;
        }
        let dx = 2.0 * w / resolution as f64;
        for j in 0..resolution {
            let x = -w + (j as f64 + 0.5) * dx;
            sum += (x * x + y * y) * dx * dy;
        }
        area += 2.0 * w * dy;
    }
    if area <= 0.0 {
        return Err(Error::Degenerate("quadrature grid missed the cell entirely".into()));
    }
    // Normalize by the area measured with the same rule, so the estimate
    // is a pure quadrature ratio.
    Ok(sum / area)
}

/// Shaping gain 10·log₁₀(E_square/E_hex) in dB.
pub fn shaping_gain_db(e_square: f64, e_hex: f64) -> Result<f64> {
    if !(e_square > 0.0 && e_hex > 0.0) {
        return Err(Error::invalid("second moments must be positive"));
    }
    Ok(10.0 * (e_square / e_hex).log10())
}

/// Truncated Epstein zeta sum ζ_Λ(2) = Σ_{λ≠0} ‖λ‖⁻⁴ over the coordinate
/// box |m|, |n| ≤ radius (m²+n² for ℤ², m²+mn+n² for A₂).
pub fn epstein_zeta(kind: LatticeKind, radius: u32) -> Result<f64> {
    if radius < 10 {
        return Err(Error::invalid("epstein_zeta radius must be >= 10"));
    }
    let r = i64::from(radius);
    let mut sum = 0.0;
    for m in -r..=r {
        for n in -r..=r {
            if m == 0 && n == 0 {
                continue;
            }
            let q = match kind {
                LatticeKind::Square => m * m + n * n,
                LatticeKind::Hex => m * m + m * n + n * n,
            } as f64;
            sum += 1.0 / (q * q);
        }
    }
    Ok(sum)
}

/// O(1/radius²) estimate of the truncation tail of [`epstein_zeta`]:
/// ∫_{‖x‖>R} ‖x‖⁻⁴ dA / covol = π/R² (ℤ²) or 2π/(√3·R²) (A₂).
pub fn epstein_zeta_tail(kind: LatticeKind, radius: u32) -> f64 {
    let r2 = f64::from(radius) * f64::from(radius);
    match kind {
        LatticeKind::Square => std::f64::consts::PI / r2,
        LatticeKind::Hex => 2.0 * std::f64::consts::PI / (SQRT_3 * r2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantize_examples() {
        let sq = Lattice2D::square();
        assert_eq!(sq.quantize(Complex64::new(0.4, -0.6)), (0, -1));
        let hex = Lattice2D::hexagonal();
        assert_eq!(hex.quantize(Complex64::new(0.0, 0.0)), (0, 0));
        let w = Complex64::new(0.5, 0.5 * SQRT_3);
        assert_eq!(hex.quantize(0.49 * w), (0, 0));
        assert_eq!(hex.quantize(0.51 * w), (0, 1));
    }

    #[test]
    fn second_moments_match_closed_forms() {
        assert_eq!(second_moment_continuous(CellKind::Square, 1.0).unwrap(), 2.0 / 3.0);
        assert_eq!(second_moment_continuous(CellKind::Hexagon, 1.0).unwrap(), 5.0 / 9.0);
        let g = shaping_gain_db(2.0 / 3.0, 5.0 / 9.0).unwrap();
        assert!((g - 0.7918124604762482).abs() < 1e-12);
        assert_eq!(shaping_gain_db(1.0, 1.0).unwrap(), 0.0);
        assert!(second_moment_continuous(CellKind::Square, 0.0).is_err());
        assert!(shaping_gain_db(0.0, 1.0).is_err());
        // Scaling law: E ∝ ρ².
        let e1 = second_moment_numeric(CellKind::Square, 1.0, 128).unwrap();
        let e2 = second_moment_numeric(CellKind::Square, 2.0, 128).unwrap();
        assert!((e2 - 4.0 * e1).abs() < 1e-12);
    }

    #[test]
    fn gaussian_p13_is_the_centered_grid() {
        let c = VoronoiConstellation::build(Ring::Gaussian, 13).unwrap();
        assert_eq!(c.len(), 169);
        let mut labels: Vec<(i64, i64)> = c.points().iter().map(|p| p.label).collect();
        labels.sort_unstable();
        let mut grid = Vec::new();
        for u in -6..=6 {
            for v in -6..=6 {
                grid.push((u, v));
            }
        }
        assert_eq!(labels, grid);
        assert_eq!(c.raw_avg_energy(), 28.0);
        assert!((c.avg_energy() - 1.0).abs() < 1e-12);
        assert!((c.min_distance() - 1.0 / 28f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn single_point_constellations_are_degenerate_but_valid() {
        let c = VoronoiConstellation::build(Ring::Eisenstein, 1).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.points()[0].label, (0, 0));
        assert_eq!(c.scale(), 1.0);
        assert_eq!(c.min_distance(), f64::INFINITY);
        assert!(VoronoiConstellation::build(Ring::Gaussian, 0).is_err());
    }

    #[test]
    fn min_distance_equalization_sets_unit_spacing() {
        let c =
            VoronoiConstellation::build_with(Ring::Eisenstein, 13, Equalization::MinDistance)
                .unwrap();
        assert!((c.min_distance() - 1.0).abs() < 1e-15);
        assert!(c.avg_energy() > 1.0);
    }

    #[test]
    fn spectrum_examples() {
        let two = DistanceSpectrum::from_points(&[
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ])
        .unwrap();
        assert_eq!(two.entries().len(), 1);
        assert!((two.entries()[0].distance - 1.0).abs() < 1e-15);
        assert!((two.entries()[0].multiplicity - 1.0).abs() < 1e-15);

        let mut grid = Vec::new();
        for u in -1..=1 {
            for v in -1..=1 {
                grid.push(Complex64::new(u as f64, v as f64));
            }
        }
        let s = DistanceSpectrum::from_points(&grid).unwrap();
        assert!((s.min_distance() - 1.0).abs() < 1e-12);
        assert!((s.min_multiplicity() - 24.0 / 9.0).abs() < 1e-12);
        assert!((s.total_multiplicity() - 8.0).abs() < 1e-12);

        grid.push(Complex64::new(1.0, 1.0)); // exact duplicate
        assert!(DistanceSpectrum::from_points(&grid).is_err());
    }

    #[test]
    fn fourth_power_examples() {
        let s = DistanceSpectrum::from_entries(vec![(1.0, 1.0)]).unwrap();
        assert_eq!(fourth_power_spectrum(&s), 1.0);
        let s = DistanceSpectrum::from_entries(vec![(1.0, 4.0), (2f64.sqrt(), 4.0)]).unwrap();
        assert!((fourth_power_spectrum(&s) - 5.0).abs() < 1e-12);
        assert!(DistanceSpectrum::from_entries(vec![(1.0, 1.0), (0.5, 1.0)]).is_err());
    }

    #[test]
    fn zeta_rejects_small_radius() {
        assert!(epstein_zeta(LatticeKind::Square, 9).is_err());
        assert!(epstein_zeta(LatticeKind::Square, 10).is_ok());
    }
}
