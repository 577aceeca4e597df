//! Core library for constructing and analyzing Alamouti space–time codes
//! built from quaternion orders over the Gaussian (ℤ[i]) and Eisenstein
//! (ℤ[w]) integers.
//!
//! The crate is organized in layers:
//!
//! * [`algebra`] — exact rational quaternion arithmetic, the Eisenstein and
//!   Gaussian integer rings, the order Γ = ℤ[w] ⊕ iℤ[w], and the complex
//!   2×2 embeddings tying reduced norms to determinants.
//! * [`lattice`] — the ℤ² and A₂ lattices, nearest-point quantizers,
//!   nested-lattice Voronoi constellations, continuous-cell second moments,
//!   distance spectra, and Epstein zeta sums.
//! * [`stbc`] — Alamouti codewords, orthogonality and determinant
//!   identities, minimum determinants, and pairwise-error/union bounds.
//! * [`channel`] — quasi-static 2×1 Rayleigh fading, matched-filter
//!   combining to the equivalent scalar channel, and seeded Monte Carlo
//!   codeword-error-rate simulation.
//! * [`infotheory`] — constellation-constrained mutual information,
//!   channel dispersion, and the finite-blocklength normal approximation.
//!
//! Everything random is driven by explicit 64-bit seeds through
//! counter-derived substreams (see [`rng`]), so every estimator in the
//! crate is bit-reproducible for a fixed seed and chunk count regardless
//! of how many threads participate.

pub mod algebra;
pub mod channel;
pub mod csvfmt;
pub mod infotheory;
pub mod lattice;
pub mod rng;
pub mod special;
pub mod stbc;

use thiserror::Error;

/// Error type shared by all fallible operations in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A documented precondition was violated by the caller.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A probability-zero degenerate input was encountered (e.g. a zero
    /// channel gain); callers should resample.
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
