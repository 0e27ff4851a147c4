//! Constancy check for the spherical representation of |x|^p: there is a
//! constant c(n,p) with |x|^p = c·∫_{S^{n−1}} |⟨x,θ⟩|^p dH^{n−1}(θ) for all
//! x, so the ratio r(x) = |x|^p / ∫ must not depend on x.

use serde::Serialize;

use crate::linalg;
use crate::quadrature::{sphere_area, sphere_sample, RngSeed};

use super::LabError;

#[derive(Debug, Clone, Serialize)]
pub struct AleskerReport {
    pub n: usize,
    pub p: f64,
    /// r(x) estimates, one per input point.
    pub r_values: Vec<f64>,
    /// Estimate of 1/c(n,p), averaged over the inputs.
    pub inv_c_estimate: f64,
    /// (max r − min r)/mean r over the inputs.
    pub max_rel_spread: f64,
    pub samples: u64,
}

/// Estimates r(x) = |x|^p / ∫_{S^{n−1}} |⟨x,θ⟩|^p dθ for every input with a
/// single shared θ-sample stream (common random numbers), and reports the
/// relative spread. Homogeneity cancels exactly, so points on one ray give
/// spread zero.
pub fn alesker_constancy_check(
    n: usize,
    p: f64,
    xs: &[Vec<f64>],
    samples: u64,
    seed: RngSeed,
) -> Result<AleskerReport, LabError> {
    if !(p >= 1.0) {
        return Err(LabError::Precondition(format!("p must be ≥ 1, got {p}")));
    }
    if xs.is_empty() {
        return Err(LabError::Precondition("need at least one point".into()));
    }
    for x in xs {
        if x.len() != n {
            return Err(LabError::Precondition("dimension mismatch".into()));
        }
        if linalg::norm(x) == 0.0 {
            return Err(LabError::Precondition("points must be nonzero".into()));
        }
    }
    let mut rng = seed.rng();
    let mut sums = vec![0.0f64; xs.len()];
    for _ in 0..samples {
        let theta = sphere_sample(&mut rng, n);
        for (s, x) in sums.iter_mut().zip(xs) {
            *s += linalg::dot(x, &theta).abs().powf(p);
        }
    }
    let area = sphere_area(n);
    let mut r_values = Vec::with_capacity(xs.len());
    let mut inv_c_sum = 0.0;
    for (s, x) in sums.iter().zip(xs) {
        let integral = area * s / samples as f64;
        let norm_p = linalg::norm(x).powf(p);
        r_values.push(norm_p / integral);
        inv_c_sum += integral / norm_p;
    }
    let max = r_values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = r_values.iter().cloned().fold(f64::INFINITY, f64::min);
    let mean = r_values.iter().sum::<f64>() / r_values.len() as f64;
    Ok(AleskerReport {
        n,
        p,
        r_values,
        inv_c_estimate: inv_c_sum / xs.len() as f64,
        max_rel_spread: (max - min) / mean,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_ray_spread_is_zero() {
        let xs = vec![
            vec![1.0, 2.0, 2.0],
            vec![2.0, 4.0, 4.0],
            vec![0.5, 1.0, 1.0],
        ];
        let r = alesker_constancy_check(3, 1.5, &xs, 2_000, RngSeed::new(5)).unwrap();
        assert!(r.max_rel_spread < 1e-12, "spread {}", r.max_rel_spread);
    }

    #[test]
    fn planar_p2_closed_form() {
        // ∫_{S¹} ⟨x,θ⟩² dθ = π|x|² ⇒ r = 1/π, 1/c = π.
        let xs = vec![vec![1.0, 0.0], vec![0.3, -0.9], vec![-2.0, 1.0]];
        let r = alesker_constancy_check(2, 2.0, &xs, 200_000, RngSeed::new(7)).unwrap();
        assert!(
            (r.inv_c_estimate - std::f64::consts::PI).abs() < 0.005 * std::f64::consts::PI,
            "1/c = {}",
            r.inv_c_estimate
        );
        for rv in &r.r_values {
            assert!((rv - 1.0 / std::f64::consts::PI).abs() < 0.01);
        }
    }

    #[test]
    fn zero_point_rejected() {
        assert!(
            alesker_constancy_check(2, 2.0, &[vec![0.0, 0.0]], 2_000, RngSeed::new(1)).is_err()
        );
    }
}
