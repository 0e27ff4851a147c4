//! Seeded Monte Carlo engines over bodies and spheres.
//!
//! Uniform body sampling is direct for boxes, balls and cylinders and uses
//! bounding-box rejection for polytopes. A radial importance sampler handles
//! the |x|^{q−n} singularity of the dual-curvature integrand when q ≤ n−1.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::ConvexBody;
use crate::linalg;

use super::{omega, sphere_area, QuadEngine, QuadratureError, QuadratureResult, RngSeed};

fn normal_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    // Box–Muller, kept in-crate so the determinism contract does not depend
    // on external distribution tables.
    loop {
        let u1: f64 = rng.random();
        if u1 > 1e-300 {
            let r = (-2.0 * u1.ln()).sqrt();
            let theta = 2.0 * std::f64::consts::PI * rng.random::<f64>();
            return (r * theta.cos(), r * theta.sin());
        }
    }
}

/// Uniform point on S^{n−1} via a normalized Gaussian vector.
pub fn sphere_sample(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let mut v = Vec::with_capacity(n + 1);
        while v.len() < n {
            let (a, b) = normal_pair(rng);
            v.push(a);
            v.push(b);
        }
        v.truncate(n);
        let norm = linalg::norm(&v);
        if norm > 1e-12 {
            return linalg::scale(&v, 1.0 / norm);
        }
    }
}

fn ball_sample(rng: &mut ChaCha8Rng, n: usize, r: f64) -> Vec<f64> {
    let dir = sphere_sample(rng, n);
    let radius = r * rng.random::<f64>().powf(1.0 / n as f64);
    linalg::scale(&dir, radius)
}

/// Welford accumulator: cancellation-free variance, so zero-variance
/// estimators report honestly tiny errors instead of rounding debris.
struct Accumulator {
    mean: f64,
    m2: f64,
    count: u64,
}

impl Accumulator {
    fn new() -> Self {
        Accumulator {
            mean: 0.0,
            m2: 0.0,
            count: 0,
        }
    }

    fn push(&mut self, v: f64) {
        self.count += 1;
        let d = v - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (v - self.mean);
    }

    /// (mean, standard error of the mean).
    fn stats(&self) -> (f64, f64) {
        let n = self.count as f64;
        let var = (self.m2 / (n - 1.0)).max(0.0);
        (self.mean, (var / n).sqrt())
    }
}

/// ∫_K f dx by Monte Carlo: direct sampling for boxes, balls and cylinders,
/// bounding-box rejection otherwise. Deterministic for a fixed seed.
pub fn mc_body_integrate<F: Fn(&[f64]) -> f64>(
    f: F,
    body: &ConvexBody,
    samples: u64,
    seed: RngSeed,
) -> Result<QuadratureResult, QuadratureError> {
    if samples < 1000 {
        return Err(QuadratureError::TooFewSamples(samples));
    }
    let mut rng = seed.rng();
    let n = body.dim();
    let mut acc = Accumulator::new();

    match body {
        ConvexBody::AxisBox { halfwidths } => {
            let vol: f64 = halfwidths.iter().map(|h| 2.0 * h).product();
            for _ in 0..samples {
                let x: Vec<f64> = halfwidths
                    .iter()
                    .map(|&h| h * (2.0 * rng.random::<f64>() - 1.0))
                    .collect();
                acc.push(f(&x));
            }
            let (mean, se) = acc.stats();
            Ok(QuadratureResult {
                value: vol * mean,
                abs_error: vol * se,
                nodes_or_samples: samples,
                engine: QuadEngine::BodyMc,
            })
        }
        ConvexBody::Ball(b) => {
            let vol = omega(b.n) * b.r.powi(b.n as i32);
            for _ in 0..samples {
                let x = ball_sample(&mut rng, b.n, b.r);
                acc.push(f(&x));
            }
            let (mean, se) = acc.stats();
            Ok(QuadratureResult {
                value: vol * mean,
                abs_error: vol * se,
                nodes_or_samples: samples,
                engine: QuadEngine::BodyMc,
            })
        }
        ConvexBody::Cylinder(c) => {
            let vol = omega(c.k) * c.l.powi(c.k as i32) * omega(c.n - c.k);
            for _ in 0..samples {
                let mut x = ball_sample(&mut rng, c.k, c.l);
                x.extend(ball_sample(&mut rng, c.n - c.k, 1.0));
                acc.push(f(&x));
            }
            let (mean, se) = acc.stats();
            Ok(QuadratureResult {
                value: vol * mean,
                abs_error: vol * se,
                nodes_or_samples: samples,
                engine: QuadEngine::BodyMc,
            })
        }
        _ => {
            // Rejection from the symmetric bounding box; the estimator is the
            // box-volume-weighted mean of f·1_K, so its 1σ error covers both
            // the acceptance and integrand fluctuations.
            let facet_form = body.to_facet_form()?;
            let hw = body.bounding_halfwidths()?;
            let box_vol: f64 = hw.iter().map(|h| 2.0 * h).product();
            let mut accepted = 0u64;
            let mut x = vec![0.0; n];
            for _ in 0..samples {
                for (xi, &h) in x.iter_mut().zip(&hw) {
                    *xi = h * (2.0 * rng.random::<f64>() - 1.0);
                }
                if facet_form.contains(&x, 0.0) {
                    accepted += 1;
                    acc.push(f(&x));
                } else {
                    acc.push(0.0);
                }
            }
            let rate = accepted as f64 / samples as f64;
            if rate < 1e-4 {
                return Err(QuadratureError::LowAcceptance(rate));
            }
            let (mean, se) = acc.stats();
            Ok(QuadratureResult {
                value: box_vol * mean,
                abs_error: box_vol * se,
                nodes_or_samples: accepted,
                engine: QuadEngine::BodyMc,
            })
        }
    }
}

/// ∫_K f dx for star-shaped-about-the-origin bodies, sampling directions
/// uniformly and radii with density ∝ r^{power−1} along each ray. With
/// f = |x|^{power−n}·(smooth) the radial weight cancels the singularity.
pub fn mc_body_integrate_radial<F: Fn(&[f64]) -> f64>(
    f: F,
    body: &ConvexBody,
    power: f64,
    samples: u64,
    seed: RngSeed,
) -> Result<QuadratureResult, QuadratureError> {
    if samples < 1000 {
        return Err(QuadratureError::TooFewSamples(samples));
    }
    if !(power > 0.0) {
        return Err(QuadratureError::BadRadialPower(power));
    }
    let n = body.dim();
    // Canonicalize V-polytopes once so radial queries are cheap.
    let canonical;
    let body = match body {
        ConvexBody::VPolytope(p) => {
            canonical = ConvexBody::Facets(p.build_facets()?);
            &canonical
        }
        other => other,
    };
    let mut rng = seed.rng();
    let area = sphere_area(n);
    let mut acc = Accumulator::new();
    for _ in 0..samples {
        let u = sphere_sample(&mut rng, n);
        let rho = body.radial(&u)?;
        let r = rho * rng.random::<f64>().powf(1.0 / power);
        let x = linalg::scale(&u, r);
        // Density of x: (1/area)·(power·r^{power−1}/ρ^{power})·r^{−(n−1)}.
        let weight = area * rho.powf(power) * r.powf(n as f64 - power) / power;
        acc.push(f(&x) * weight);
    }
    let (mean, se) = acc.stats();
    Ok(QuadratureResult {
        value: mean,
        abs_error: se,
        nodes_or_samples: samples,
        engine: QuadEngine::BodyMc,
    })
}

/// ∫_{S^{n−1}} f dH^{n−1} by uniform sphere sampling.
pub fn mc_sphere_integrate<F: Fn(&[f64]) -> f64>(
    f: F,
    n: usize,
    samples: u64,
    seed: RngSeed,
) -> Result<QuadratureResult, QuadratureError> {
    if samples < 1000 {
        return Err(QuadratureError::TooFewSamples(samples));
    }
    let mut rng = seed.rng();
    let area = sphere_area(n);
    let mut acc = Accumulator::new();
    for _ in 0..samples {
        let u = sphere_sample(&mut rng, n);
        acc.push(f(&u));
    }
    let (mean, se) = acc.stats();
    Ok(QuadratureResult {
        value: area * mean,
        abs_error: area * se,
        nodes_or_samples: samples,
        engine: QuadEngine::SphereMc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Ball;

    fn seed() -> RngSeed {
        RngSeed::new(20240807)
    }

    #[test]
    fn cube_volume() {
        let cube = ConvexBody::axis_box(vec![1.0, 1.0, 1.0]).unwrap();
        let r = mc_body_integrate(|_| 1.0, &cube, 10_000, seed()).unwrap();
        assert!((r.value - 8.0).abs() <= 1e-9);
    }

    #[test]
    fn ball_volume() {
        let ball = ConvexBody::Ball(Ball::new(3, 1.0).unwrap());
        let r = mc_body_integrate(|_| 1.0, &ball, 10_000, seed()).unwrap();
        let expect = 4.0 * std::f64::consts::PI / 3.0;
        assert!((r.value - expect).abs() <= 1e-9);
    }

    #[test]
    fn norm_over_disc() {
        // ∫_{B₂} |x| = 2π/3.
        let disc = ConvexBody::Ball(Ball::new(2, 1.0).unwrap());
        let r = mc_body_integrate(linalg::norm, &disc, 200_000, seed()).unwrap();
        let expect = 2.0 * std::f64::consts::PI / 3.0;
        assert!(
            (r.value - expect).abs() <= 3.0 * r.abs_error,
            "value {} ± {}, expect {}",
            r.value,
            r.abs_error,
            expect
        );
    }

    #[test]
    fn rejection_on_cross_polytope() {
        let body = ConvexBody::VPolytope(crate::geometry::cross_polytope(3));
        let r = mc_body_integrate(|_| 1.0, &body, 100_000, seed()).unwrap();
        let expect = 8.0 / 6.0;
        assert!((r.value - expect).abs() <= 3.0 * r.abs_error);
    }

    #[test]
    fn sphere_surface_area() {
        let r = mc_sphere_integrate(|_| 1.0, 3, 10_000, seed()).unwrap();
        assert!((r.value - 4.0 * std::f64::consts::PI).abs() <= 1e-9);
        assert_eq!(r.abs_error, 0.0);
    }

    #[test]
    fn sphere_second_moment() {
        // ∫_{S²} ⟨u,e₁⟩² dH² = 4π/3 by the trace argument.
        let r = mc_sphere_integrate(|u| u[0] * u[0], 3, 200_000, seed()).unwrap();
        let expect = 4.0 * std::f64::consts::PI / 3.0;
        assert!((r.value - expect).abs() <= 3.0 * r.abs_error);
    }

    #[test]
    fn determinism_bit_identical() {
        let ball = ConvexBody::Ball(Ball::new(3, 2.0).unwrap());
        let a = mc_body_integrate(linalg::norm_sq, &ball, 5_000, seed()).unwrap();
        let b = mc_body_integrate(linalg::norm_sq, &ball, 5_000, seed()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn radial_importance_zero_variance_on_ball_power_integrand() {
        // f = |x|^{q−n} on B_r: the weighted estimator is exactly constant.
        let ball = ConvexBody::Ball(Ball::new(3, 1.0).unwrap());
        let q = 0.5;
        let r =
            mc_body_integrate_radial(|x| linalg::norm(x).powf(q - 3.0), &ball, q, 2_000, seed())
                .unwrap();
        // (q/n)·∫ = ω₃ ⇒ ∫ = 3ω₃/q... the raw integral here is ∫|x|^{q−3}dx = nω_n/q.
        let expect = 3.0 * omega(3) / q;
        assert!((r.value - expect).abs() < 1e-10);
        assert!(r.abs_error < 1e-10);
    }

    #[test]
    fn too_few_samples_rejected() {
        let ball = ConvexBody::Ball(Ball::new(2, 1.0).unwrap());
        assert!(matches!(
            mc_body_integrate(|_| 1.0, &ball, 10, seed()),
            Err(QuadratureError::TooFewSamples(10))
        ));
    }
}
