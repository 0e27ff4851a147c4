//! Closed-form dual curvature measures of the cylinder family
//! K_l = (l·B_k) × B_{n−k}, reduced to double integrals over [0,1]² in
//! cylindrical coordinates and evaluated by tensor Gauss–Legendre.

use crate::quadrature::{gauss_legendre_2d, omega};

use super::{EngineTag, MeasureConfig, MeasureError, MeasureEstimate};

fn validate(q: f64, n: usize, k: usize, l: f64) -> Result<(), MeasureError> {
    if !(q > 0.0) {
        return Err(MeasureError::NonPositiveQ(q));
    }
    if n < 2 || k == 0 || k >= n {
        return Err(MeasureError::InvalidParameter(
            "cylinder requires 1 ≤ k ≤ n−1".into(),
        ));
    }
    if !(l > 0.0) {
        return Err(MeasureError::InvalidParameter("l must be positive".into()));
    }
    Ok(())
}

/// Shared prefactor c(q,k,n) = (q/n)·k·ω_k·(n−k)·ω_{n−k}.
pub(crate) fn prefactor(q: f64, n: usize, k: usize) -> f64 {
    q / n as f64 * k as f64 * omega(k) * (n - k) as f64 * omega(n - k)
}

/// C̃_q(K_l, S^{n−1} ∩ L) for L the first-k coordinate block:
/// c·l^{q−n+k}·∫₀¹∫₀¹ s^{q−1} t^{n−k−1} (1 + l^{−2}t²)^{(q−n)/2} dt ds.
pub fn cylinder_dcm_subspace(
    q: f64,
    n: usize,
    k: usize,
    l: f64,
    cfg: &MeasureConfig,
) -> Result<MeasureEstimate, MeasureError> {
    validate(q, n, k, l)?;
    let alpha = (q - n as f64) / 2.0;
    let exp_s = q - 1.0;
    let exp_t = (n - k) as f64 - 1.0;
    let inv_l2 = 1.0 / (l * l);
    let integral = gauss_legendre_2d(
        |s, t| pow_or_one(s, exp_s) * pow_or_one(t, exp_t) * (1.0 + inv_l2 * t * t).powf(alpha),
        cfg.gl_nodes,
    )?;
    let scale = prefactor(q, n, k) * l.powf(q - n as f64 + k as f64);
    Ok(MeasureEstimate {
        value: scale * integral.value,
        abs_error: scale * integral.abs_error,
        engine: EngineTag::ClosedForm,
        q,
        body: format!("cylinder(n={n}, k={k}, l={l})"),
        selection: "S ∩ L (axis block)".to_string(),
        nodes_or_samples: integral.nodes_or_samples,
    })
}

/// C̃_q(K_l, S^{n−1}):
/// c·l^{q−n+k}·∫₀¹∫₀¹ s^{k−1} t^{n−k−1} (s² + l^{−2}t²)^{(q−n)/2} dt ds.
pub fn cylinder_dcm_total(
    q: f64,
    n: usize,
    k: usize,
    l: f64,
    cfg: &MeasureConfig,
) -> Result<MeasureEstimate, MeasureError> {
    validate(q, n, k, l)?;
    let alpha = (q - n as f64) / 2.0;
    let exp_s = k as f64 - 1.0;
    let exp_t = (n - k) as f64 - 1.0;
    let inv_l2 = 1.0 / (l * l);
    let integral = gauss_legendre_2d(
        |s, t| pow_or_one(s, exp_s) * pow_or_one(t, exp_t) * (s * s + inv_l2 * t * t).powf(alpha),
        cfg.gl_nodes,
    )?;
    let scale = prefactor(q, n, k) * l.powf(q - n as f64 + k as f64);
    Ok(MeasureEstimate {
        value: scale * integral.value,
        abs_error: scale * integral.abs_error,
        engine: EngineTag::ClosedForm,
        q,
        body: format!("cylinder(n={n}, k={k}, l={l})"),
        selection: "full sphere".to_string(),
        nodes_or_samples: integral.nodes_or_samples,
    })
}

fn pow_or_one(base: f64, exp: f64) -> f64 {
    if exp == 0.0 {
        1.0
    } else {
        base.powf(exp)
    }
}

/// The limiting concentration ratio (q−n+k)/q reached by K_l as l → ∞.
pub fn cylinder_ratio_limit(q: f64, n: usize, k: usize) -> Result<f64, MeasureError> {
    if !(q > n as f64) {
        return Err(MeasureError::InvalidParameter(format!(
            "ratio limit requires q > n, got q = {q}, n = {n}"
        )));
    }
    if k == 0 || k >= n {
        return Err(MeasureError::InvalidParameter(
            "cylinder requires 1 ≤ k ≤ n−1".into(),
        ));
    }
    Ok((q - n as f64 + k as f64) / q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ConvexBody, Cylinder};
    use crate::quadrature::{mc_body_integrate, RngSeed};

    fn cfg() -> MeasureConfig {
        MeasureConfig::default()
    }

    #[test]
    fn subspace_integral_limit_large_l() {
        // value/(c·l^{q−n+k}) → 1/(q(n−k)) as l → ∞.
        let (q, n, k) = (4.0, 3usize, 1usize);
        let l = 1e6;
        let m = cylinder_dcm_subspace(q, n, k, l, &cfg()).unwrap();
        let normalized = m.value / (prefactor(q, n, k) * l.powf(q - n as f64 + k as f64));
        let limit = 1.0 / (q * (n - k) as f64);
        assert!((normalized - limit).abs() < 1e-6, "{normalized} vs {limit}");
    }

    #[test]
    fn total_integral_limit_large_l() {
        // value/(c·l^{q−n+k}) → 1/((q−n+k)(n−k)).
        let (q, n, k) = (4.0, 3usize, 1usize);
        let l = 1e6;
        let m = cylinder_dcm_total(q, n, k, l, &cfg()).unwrap();
        let normalized = m.value / (prefactor(q, n, k) * l.powf(q - n as f64 + k as f64));
        let limit = 1.0 / ((q - n as f64 + k as f64) * (n - k) as f64);
        assert!((normalized - limit).abs() < 1e-5, "{normalized} vs {limit}");
    }

    #[test]
    fn q_equals_n_total_is_volume() {
        for (n, k, l) in [(3usize, 1usize, 2.0f64), (3, 2, 5.0), (4, 2, 0.7)] {
            let q = n as f64;
            let m = cylinder_dcm_total(q, n, k, l, &cfg()).unwrap();
            let vol = omega(k) * l.powi(k as i32) * omega(n - k);
            assert!(
                (m.value - vol).abs() < 1e-9 * vol,
                "n={n} k={k} l={l}: {} vs {vol}",
                m.value
            );
        }
    }

    #[test]
    fn example_value_n3_k1_q4_l1() {
        // c·∫₀¹ s³ ds·∫₀¹ t√(1+t²) dt with c = 16π/3
        // = c·(1/4)·(2√2−1)/3 ≈ 2.552929.
        let m = cylinder_dcm_subspace(4.0, 3, 1, 1.0, &cfg()).unwrap();
        let c = 16.0 * std::f64::consts::PI / 3.0;
        let inner = (2.0 * 2.0f64.sqrt() - 1.0) / 3.0;
        let expect = c * 0.25 * inner;
        assert!(
            (m.value - expect).abs() < 1e-10 * expect,
            "{} vs {expect}",
            m.value
        );
    }

    #[test]
    fn total_matches_body_mc() {
        let (q, n, k, l) = (4.0, 3usize, 1usize, 5.0f64);
        let exact = cylinder_dcm_total(q, n, k, l, &cfg()).unwrap();
        let body = ConvexBody::Cylinder(Cylinder::new(n, k, l).unwrap());
        let mc = mc_body_integrate(
            |x| crate::linalg::norm(x).powf(q - n as f64),
            &body,
            200_000,
            RngSeed::new(99),
        )
        .unwrap();
        let mc_value = q / n as f64 * mc.value;
        let mc_err = q / n as f64 * mc.abs_error;
        assert!(
            (mc_value - exact.value).abs() <= 3.0 * (mc_err + exact.abs_error),
            "mc {mc_value} ± {mc_err} vs exact {}",
            exact.value
        );
    }

    #[test]
    fn subspace_at_q_n_matches_body_mc() {
        // q = n: the lateral-region mass against an indicator body-MC oracle.
        let (q, n, k, l) = (3.0, 3usize, 1usize, 2.0f64);
        let exact = cylinder_dcm_subspace(q, n, k, l, &cfg()).unwrap();
        let body = ConvexBody::Cylinder(Cylinder::new(n, k, l).unwrap());
        let axis = crate::geometry::Subspace::coordinate(n, &[0]).unwrap();
        let mc_cfg = crate::measures::MeasureConfig::default()
            .with_engine(crate::measures::EngineChoice::BodyMc)
            .with_seed(RngSeed::new(5150));
        let mc = crate::measures::dual_curvature(
            &body,
            &crate::geometry::NormalSelection::SubspaceCap(axis),
            q,
            &mc_cfg,
        )
        .unwrap();
        assert!(
            (mc.value - exact.value).abs() <= 3.0 * (mc.abs_error + exact.abs_error),
            "mc {} ± {} vs exact {}",
            mc.value,
            mc.abs_error,
            exact.value
        );
        // Within 1% as well at the default budget.
        assert!((mc.value - exact.value).abs() <= 0.01 * exact.value);
    }

    #[test]
    fn ratio_limits() {
        assert!((cylinder_ratio_limit(4.0, 3, 1).unwrap() - 0.5).abs() < 1e-15);
        assert!((cylinder_ratio_limit(4.0, 3, 2).unwrap() - 0.75).abs() < 1e-15);
        let n = 5usize;
        let k = 2usize;
        let q = n as f64 + 1.0;
        assert!(
            (cylinder_ratio_limit(q, n, k).unwrap() - (1.0 + k as f64) / (n as f64 + 1.0)).abs()
                < 1e-15
        );
        assert!(cylinder_ratio_limit(3.0, 3, 1).is_err());
    }
}
