//! Numerical integration engines with error estimates: Grundmann–Möller
//! simplex rules for facet integrals, tensor Gauss–Legendre for the cylinder
//! double integrals, and seeded Monte Carlo over bodies and spheres.
//!
//! Every engine is a pure function of (input, seed): identical inputs yield
//! bit-identical results.

mod gauss;
mod monte_carlo;
mod simplex;

pub use gauss::{gauss_legendre_2d, gauss_legendre_nodes, gl_integrate_1d};
pub use monte_carlo::{
    mc_body_integrate, mc_body_integrate_radial, mc_sphere_integrate, sphere_sample,
};
pub use simplex::{facet_area, simplex_integrate, triangulate_facet};

use serde::Serialize;
use thiserror::Error;

use crate::geometry::GeometryError;

#[derive(Debug, Error)]
pub enum QuadratureError {
    #[error("degenerate simplex")]
    DegenerateSimplex,
    #[error("rule degree must lie in [1, 25], got {0}")]
    BadDegree(usize),
    #[error("nodes per axis must lie in [2, 200], got {0}")]
    BadNodeCount(usize),
    #[error("Monte Carlo requires at least 1000 samples, got {0}")]
    TooFewSamples(u64),
    #[error("bounding box too loose: acceptance rate {0:.2e} below 1e-4")]
    LowAcceptance(f64),
    #[error("radial importance sampling requires a positive power, got {0}")]
    BadRadialPower(f64),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Which engine produced a numeric integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadEngine {
    Simplex,
    GaussLegendre,
    BodyMc,
    SphereMc,
}

/// A numeric integral with its error estimate. Monte Carlo engines report
/// 1σ; deterministic rules report rule-difference estimates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error: f64,
    pub nodes_or_samples: u64,
    pub engine: QuadEngine,
}

/// Deterministic seed: identical (seed, stream) pairs expand to identical
/// sample sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RngSeed {
    pub seed: u64,
    pub stream: u64,
}

impl RngSeed {
    pub fn new(seed: u64) -> Self {
        RngSeed { seed, stream: 0 }
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        RngSeed { seed, stream }
    }

    /// Independent stream for trial `t` of a fuzz run (same master seed).
    pub fn for_trial(&self, t: u64) -> RngSeed {
        RngSeed {
            seed: self.seed,
            stream: self
                .stream
                .wrapping_add(t.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
        }
    }

    pub fn rng(&self) -> rand_chacha::ChaCha8Rng {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

impl Default for RngSeed {
    fn default() -> Self {
        RngSeed::new(0x5EED)
    }
}

/// Volume ω_n of the n-dimensional unit ball, via the two-step recursion
/// ω_n = 2π/n · ω_{n−2} with ω_0 = 1, ω_1 = 2.
pub fn omega(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * std::f64::consts::PI / n as f64 * omega(n - 2),
    }
}

/// Surface area of S^{n−1}, i.e. n·ω_n.
pub fn sphere_area(n: usize) -> f64 {
    n as f64 * omega(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_small_dimensions() {
        assert!((omega(1) - 2.0).abs() < 1e-15);
        assert!((omega(2) - std::f64::consts::PI).abs() < 1e-15);
        assert!((omega(3) - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-14);
        assert!((omega(4) - std::f64::consts::PI.powi(2) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn seed_streams_differ() {
        use rand::RngCore;
        let a = RngSeed::new(7).for_trial(0);
        let b = RngSeed::new(7).for_trial(1);
        assert_ne!(a.rng().next_u64(), b.rng().next_u64());
        // Same (seed, stream) ⇒ same sequence.
        let mut r1 = a.rng();
        let mut r2 = a.rng();
        for _ in 0..16 {
            assert_eq!(r1.next_u64(), r2.next_u64());
        }
    }
}
