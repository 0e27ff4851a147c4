//! The Brunn–Minkowski-type inequality for moments of the Euclidean norm:
//! M_p(K_λ) + M_p(K_{1−λ}) ≥ |2λ−1|^p·(M_p(K₀) + M_p(K₁)) for p ≥ 1 and
//! equal-volume bodies with parallel affine hulls, its reflection corollary,
//! the sharpness probe for the |2λ−1|^p factor, the p ∈ (0,1)
//! counterexample, and the quasiconvex translate inequality.

use serde::Serialize;

use crate::geometry::{minkowski_combination, Hull};
use crate::linalg;
use crate::measures::{moment_integral, MeasureConfig, MeasureEstimate};

use super::{EqualityCase, InequalityReport, LabError, ARITHMETIC_TOL_REL};

fn projector(h: &Hull) -> (usize, Vec<Vec<f64>>) {
    let (chart, _) = h.chart();
    let n = h.ambient_dim();
    let mut p = vec![vec![0.0; n]; n];
    for d in &chart.dirs {
        for i in 0..n {
            for j in 0..n {
                p[i][j] += d[i] * d[j];
            }
        }
    }
    (chart.dim(), p)
}

fn hulls_parallel(a: &Hull, b: &Hull) -> bool {
    if a.ambient_dim() != b.ambient_dim() {
        return false;
    }
    let (ka, pa) = projector(a);
    let (kb, pb) = projector(b);
    if ka != kb {
        return false;
    }
    let mut diff = 0.0;
    for (ra, rb) in pa.iter().zip(&pb) {
        for (x, y) in ra.iter().zip(rb) {
            diff += (x - y) * (x - y);
        }
    }
    diff.sqrt() <= 1e-9
}

/// Interval of a 1-dimensional hull along the unit direction of its line
/// (which passes through the origin when the chart offset vanishes).
fn line_interval(h: &Hull) -> Option<(Vec<f64>, f64, f64)> {
    let (chart, local) = h.chart();
    if chart.dim() != 1 {
        return None;
    }
    let scale = h
        .points()
        .iter()
        .map(|p| linalg::norm(p))
        .fold(0.0f64, f64::max)
        .max(1.0);
    if chart.offset_norm() > 1e-10 * scale {
        return None;
    }
    let lo = local.iter().map(|y| y[0]).fold(f64::INFINITY, f64::min);
    let hi = local.iter().map(|y| y[0]).fold(f64::NEG_INFINITY, f64::max);
    Some((chart.dirs[0].clone(), lo, hi))
}

fn segments_on_common_origin_line(k0: &Hull, k1: &Hull) -> Option<(f64, f64, f64, f64)> {
    let (d0, a0, b0) = line_interval(k0)?;
    let (d1, a1, b1) = line_interval(k1)?;
    let c = linalg::dot(&d0, &d1);
    if (c.abs() - 1.0).abs() > 1e-10 {
        return None;
    }
    // Express both in the d0 coordinate.
    if c > 0.0 {
        Some((a0, b0, a1, b1))
    } else {
        Some((a0, b0, -b1, -a1))
    }
}

fn separated_by_origin(lo_a: f64, hi_a: f64, lo_b: f64, hi_b: f64, tol: f64) -> bool {
    (hi_a <= tol && lo_b >= -tol) || (hi_b <= tol && lo_a >= -tol)
}

fn combined_tol(parts: &[&MeasureEstimate], weight_rhs: f64) -> f64 {
    let mut e = 0.0;
    for m in &parts[..2] {
        e += m.abs_error;
    }
    for m in &parts[2..] {
        e += weight_rhs * m.abs_error;
    }
    1e-9 + 3.0 * e
}

/// Moment Brunn–Minkowski check for two bodies of equal intrinsic dimension
/// and k-volume with parallel affine hulls.
pub fn moment_bm_check(
    k0: &Hull,
    k1: &Hull,
    lambda: f64,
    p: f64,
    cfg: &MeasureConfig,
) -> Result<InequalityReport, LabError> {
    if !(p >= 1.0) {
        return Err(LabError::Precondition(format!("p must be ≥ 1, got {p}")));
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(LabError::Precondition("λ must lie in [0,1]".into()));
    }
    if !hulls_parallel(k0, k1) {
        return Err(LabError::Precondition(
            "affine hulls must be parallel with equal intrinsic dimension".into(),
        ));
    }
    let vol0 = moment_integral(k0, 0.0, cfg)?;
    let vol1 = moment_integral(k1, 0.0, cfg)?;
    if (vol0.value - vol1.value).abs() > 1e-9 * vol0.value.abs().max(vol1.value.abs()) {
        return Err(LabError::Precondition(format!(
            "k-volumes must match to 1e-9 relative: {} vs {}",
            vol0.value, vol1.value
        )));
    }

    let k_lambda = minkowski_combination(k0, k1, lambda)?;
    let k_colambda = minkowski_combination(k0, k1, 1.0 - lambda)?;
    let m_lambda = moment_integral(&k_lambda, p, cfg)?;
    let m_colambda = moment_integral(&k_colambda, p, cfg)?;
    let m0 = moment_integral(k0, p, cfg)?;
    let m1 = moment_integral(k1, p, cfg)?;
    let factor = (2.0 * lambda - 1.0).abs().powf(p);
    let lhs = m_lambda.value + m_colambda.value;
    let rhs = factor * (m0.value + m1.value);
    let tol_abs = combined_tol(&[&m_lambda, &m_colambda, &m0, &m1], factor);

    let mut equality_case = EqualityCase::None;
    if lambda == 0.0 || lambda == 1.0 {
        equality_case = EqualityCase::LambdaEndpoint;
    } else if p == 1.0 {
        if let Some((a0, b0, _, _)) = segments_on_common_origin_line(k0, k1) {
            if let (Some((_, la, ha)), Some((_, lb, hb))) =
                (line_interval(&k_lambda), line_interval(&k_colambda))
            {
                // Tolerance normalized against the segment length.
                let tol = 1e-10 * (b0 - a0).abs().max(1e-300);
                if separated_by_origin(la, ha, lb, hb, tol) {
                    equality_case = EqualityCase::P1Separated;
                }
            }
        }
    }
    let mut report =
        InequalityReport::evaluate(lhs, rhs, tol_abs, ARITHMETIC_TOL_REL, equality_case);
    if report.equality_case == EqualityCase::None && report.numerically_equal() {
        report.equality_case = EqualityCase::NumericEqual;
    }
    Ok(report)
}

/// Corollary for K₁ = −K₀: M_p((1−λ)K + λ(−K)) ≥ |2λ−1|^p·M_p(K).
pub fn reflection_corollary_check(
    k: &Hull,
    lambda: f64,
    p: f64,
    cfg: &MeasureConfig,
) -> Result<InequalityReport, LabError> {
    if !(p >= 1.0) {
        return Err(LabError::Precondition(format!("p must be ≥ 1, got {p}")));
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(LabError::Precondition("λ must lie in [0,1]".into()));
    }
    let reflected = k.reflect();
    let combo = minkowski_combination(k, &reflected, lambda)?;
    let m_combo = moment_integral(&combo, p, cfg)?;
    let m_k = moment_integral(k, p, cfg)?;
    let factor = (2.0 * lambda - 1.0).abs().powf(p);
    let lhs = m_combo.value;
    let rhs = factor * m_k.value;
    let tol_abs = 1e-9 + 3.0 * (m_combo.abs_error + factor * m_k.abs_error);

    let mut equality_case = EqualityCase::None;
    if lambda == 0.0 || lambda == 1.0 {
        equality_case = EqualityCase::LambdaEndpoint;
    } else if p == 1.0 {
        if let Some((_, lo, hi)) = line_interval(k) {
            if let Some((_, lc, hc)) = line_interval(&combo) {
                let tol = 1e-10 * (hi - lo).abs().max(1e-300);
                // Origin not in the relative interior of the combination.
                if lc >= -tol || hc <= tol {
                    equality_case = EqualityCase::P1Separated;
                }
            }
        }
    }
    let mut report =
        InequalityReport::evaluate(lhs, rhs, tol_abs, ARITHMETIC_TOL_REL, equality_case);
    if report.equality_case == EqualityCase::None && report.numerically_equal() {
        report.equality_case = EqualityCase::NumericEqual;
    }
    Ok(report)
}

/// Sharpness probe for the |2λ−1|^p factor: with K₀ = C + ρ·u for symmetric
/// C and K₁ = −K₀, returns M_p(K_λ)/M_p(K₀), which tends to |2λ−1|^p as
/// ρ → ∞.
pub fn tightness_factor_probe(
    c: &Hull,
    u: &[f64],
    rho: f64,
    lambda: f64,
    p: f64,
    cfg: &MeasureConfig,
) -> Result<f64, LabError> {
    if !(rho > 0.0) {
        return Err(LabError::Precondition("ρ must be positive".into()));
    }
    if (linalg::norm(u) - 1.0).abs() > 1e-10 {
        return Err(LabError::Precondition("u must be a unit vector".into()));
    }
    let shift = linalg::scale(u, rho);
    let k0 = c.translate(&shift);
    let k1 = k0.reflect();
    let k_lambda = minkowski_combination(&k0, &k1, lambda)?;
    let m_lambda = moment_integral(&k_lambda, p, cfg)?;
    let m0 = moment_integral(&k0, p, cfg)?;
    Ok(m_lambda.value / m0.value)
}

/// Ratio of the two sides of the p ∈ (0,1) counterexample with
/// K = [ε, ε+1] and λ = (ε+1)/(2ε+1):
/// ((ε+1)^{p+1} − ε^{p+1})/(2ε+1)^p, which exceeds 1 for small ε.
pub fn small_p_ratio(eps: f64, p: f64) -> f64 {
    ((eps + 1.0).powf(p + 1.0) - eps.powf(p + 1.0)) / (2.0 * eps + 1.0).powf(p)
}

/// The 1-dimensional counterexample for p ∈ (0,1): both sides are closed
/// forms. The report's claim direction is reversed by design: lhs is the
/// |2λ−1|^p·M_p(K) side, rhs is M_p(K_λ) = 1/(p+1), so `holds` (and a
/// positive margin) certifies that the Brunn–Minkowski direction fails.
pub fn small_p_counterexample(eps: f64, p: f64) -> Result<InequalityReport, LabError> {
    if !(eps > 0.0) {
        return Err(LabError::Precondition("ε must be positive".into()));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(LabError::Precondition(format!(
            "p must lie in (0,1), got {p}"
        )));
    }
    let rhs = 1.0 / (p + 1.0);
    let lhs = small_p_ratio(eps, p) / (p + 1.0);
    Ok(InequalityReport::evaluate(
        lhs,
        rhs,
        1e-300,
        ARITHMETIC_TOL_REL,
        EqualityCase::None,
    ))
}

/// Translate inequality report plus the (report-only) sublevel equality
/// probe.
#[derive(Debug, Clone, Serialize)]
pub struct AndersonReport {
    pub inequality: InequalityReport,
    /// For λ < 1: whether (Q+v) ∩ rB = (Q ∩ rB) + v held at every probed
    /// radius (a necessary condition for equality). `None` at λ = 1.
    pub sublevel_grid_equal: Option<bool>,
}

/// ∫_{Q+v} |x|^p ≥ ∫_{Q+λv} |x|^p for symmetric Q and λ ∈ [0,1]; the
/// integrand family is the even quasiconvex powers |x|^p, p ≥ 0.
pub fn anderson_translate_check(
    q: &Hull,
    v: &[f64],
    lambda: f64,
    p: f64,
    cfg: &MeasureConfig,
) -> Result<AndersonReport, LabError> {
    if !(p >= 0.0) {
        return Err(LabError::Precondition(
            "supported quasiconvex family is |x|^p with p ≥ 0".into(),
        ));
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(LabError::Precondition("λ must lie in [0,1]".into()));
    }
    let scale = q
        .points()
        .iter()
        .map(|pt| linalg::norm(pt))
        .fold(0.0f64, f64::max)
        .max(1.0);
    for pt in q.points() {
        let neg = linalg::scale(pt, -1.0);
        if !q
            .points()
            .iter()
            .any(|other| linalg::dist(other, &neg) <= 1e-9 * scale)
        {
            return Err(LabError::Precondition("Q must be origin-symmetric".into()));
        }
    }
    let full = q.translate(v);
    let partial = q.translate(&linalg::scale(v, lambda));
    let m_full = moment_integral(&full, p, cfg)?;
    let m_partial = moment_integral(&partial, p, cfg)?;
    let tol_abs = 1e-9 + 3.0 * (m_full.abs_error + m_partial.abs_error);

    let mut equality_case = EqualityCase::None;
    if lambda == 1.0 {
        equality_case = EqualityCase::LambdaEndpoint;
    } else if linalg::norm(v) == 0.0 {
        equality_case = EqualityCase::NumericEqual;
    }
    let mut report = InequalityReport::evaluate(
        m_full.value,
        m_partial.value,
        tol_abs,
        ARITHMETIC_TOL_REL,
        equality_case,
    );
    if report.equality_case == EqualityCase::None && report.numerically_equal() {
        report.equality_case = EqualityCase::NumericEqual;
    }

    let sublevel_grid_equal = if lambda < 1.0 {
        Some(sublevel_probe(q, v, scale))
    } else {
        None
    };
    Ok(AndersonReport {
        inequality: report,
        sublevel_grid_equal,
    })
}

/// Finite-radius probe of the equality condition
/// (Q+v) ∩ rB = (Q ∩ rB) + v, tested on the vertices of Q over a radius
/// grid; points within 1e−9 of either sphere are skipped as boundary cases.
fn sublevel_probe(q: &Hull, v: &[f64], scale: f64) -> bool {
    let radii: Vec<f64> = (1..=8).map(|i| scale * i as f64 / 4.0).collect();
    for r in radii {
        for pt in q.points() {
            let plain = linalg::norm(pt);
            let shifted = linalg::norm(&linalg::add(pt, v));
            if (plain - r).abs() <= 1e-9 * scale || (shifted - r).abs() <= 1e-9 * scale {
                continue;
            }
            if (plain <= r) != (shifted <= r) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Vector;

    fn cfg() -> MeasureConfig {
        MeasureConfig::default()
    }

    fn segment(a: &[f64], b: &[f64]) -> Hull {
        Hull::new(vec![
            Vector::from_slice(a).unwrap(),
            Vector::from_slice(b).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn segment_equality_case() {
        // K₀ = [1,2]·u, K₁ = [−2,−1]·u, λ = 2/3, p = 1: both sides 1.
        let u = [3.0 / 5.0, 4.0 / 5.0];
        let k0 = segment(&[u[0], u[1]], &[2.0 * u[0], 2.0 * u[1]]);
        let k1 = segment(&[-2.0 * u[0], -2.0 * u[1]], &[-u[0], -u[1]]);
        let r = moment_bm_check(&k0, &k1, 2.0 / 3.0, 1.0, &cfg()).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-12, "lhs {}", r.lhs);
        assert!((r.rhs - 1.0).abs() < 1e-12, "rhs {}", r.rhs);
        assert_eq!(r.equality_case, EqualityCase::P1Separated);
        assert!(r.holds);
    }

    #[test]
    fn lambda_endpoint_is_equality() {
        let k0 = segment(&[1.0], &[2.0]);
        let k1 = segment(&[-2.0], &[-1.0]);
        let r = moment_bm_check(&k0, &k1, 1.0, 2.0, &cfg()).unwrap();
        assert_eq!(r.equality_case, EqualityCase::LambdaEndpoint);
        assert!(r.numerically_equal());
    }

    #[test]
    fn squares_at_half_lambda() {
        // K₀ = K₁ = square: lhs = 2·M_p(square) > 0 = rhs.
        let sq = Hull::from_coords(vec![
            vec![1.0, 1.0],
            vec![1.0, -1.0],
            vec![-1.0, -1.0],
            vec![-1.0, 1.0],
        ])
        .unwrap();
        let r = moment_bm_check(&sq, &sq, 0.5, 2.0, &cfg()).unwrap();
        assert_eq!(r.rhs, 0.0);
        assert!(r.lhs > 2.0);
        assert!(r.holds);
        assert_eq!(r.equality_case, EqualityCase::None);
    }

    #[test]
    fn unequal_volumes_rejected() {
        let k0 = segment(&[0.0], &[1.0]);
        let k1 = segment(&[0.0], &[2.0]);
        assert!(matches!(
            moment_bm_check(&k0, &k1, 0.5, 1.0, &cfg()),
            Err(LabError::Precondition(_))
        ));
    }

    #[test]
    fn nonparallel_hulls_rejected() {
        let k0 = segment(&[0.0, 0.0], &[1.0, 0.0]);
        let k1 = segment(&[0.0, 0.0], &[0.0, 1.0]);
        assert!(matches!(
            moment_bm_check(&k0, &k1, 0.5, 1.0, &cfg()),
            Err(LabError::Precondition(_))
        ));
    }

    #[test]
    fn corollary_endpoint_and_separated() {
        let k = segment(&[1.0], &[2.0]);
        let r = reflection_corollary_check(&k, 0.0, 1.0, &cfg()).unwrap();
        assert_eq!(r.equality_case, EqualityCase::LambdaEndpoint);
        assert!((r.lhs - 1.5).abs() < 1e-12 && (r.rhs - 1.5).abs() < 1e-12);

        // λ = 3/4: K_λ = [−5/4, −1/4], both sides 3/4.
        let r = reflection_corollary_check(&k, 0.75, 1.0, &cfg()).unwrap();
        assert!((r.lhs - 0.75).abs() < 1e-12, "lhs {}", r.lhs);
        assert!((r.rhs - 0.75).abs() < 1e-12);
        assert_eq!(r.equality_case, EqualityCase::P1Separated);
    }

    #[test]
    fn corollary_symmetric_half() {
        let sym = segment(&[-1.0], &[1.0]);
        let r = reflection_corollary_check(&sym, 0.5, 2.0, &cfg()).unwrap();
        assert_eq!(r.rhs, 0.0);
        assert!(r.lhs > 0.0);
    }

    #[test]
    fn tightness_stabilizes_at_half_for_p1() {
        // C = [−1,1]·e₁, p = 1, λ = 3/4: the ratio is exactly 1/2 once the
        // translated segments clear the origin.
        let c = segment(&[-1.0], &[1.0]);
        for rho in [10.0, 100.0, 1000.0] {
            let ratio = tightness_factor_probe(&c, &[1.0], rho, 0.75, 1.0, &cfg()).unwrap();
            assert!((ratio - 0.5).abs() < 2e-3, "rho={rho}: {ratio}");
        }
        // λ = 1 gives ratio 1 for any ρ.
        let ratio = tightness_factor_probe(&c, &[1.0], 7.0, 1.0, 1.0, &cfg()).unwrap();
        assert!((ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn small_p_example_value() {
        // ε = 0.01, p = 0.5: ratio ≈ 1.00405.
        let ratio = small_p_ratio(0.01, 0.5);
        assert!((ratio - 1.00405).abs() < 1e-5, "{ratio}");
        let r = small_p_counterexample(0.01, 0.5).unwrap();
        assert!(r.holds && r.margin > 0.0);
        // The reversal persists for large ε: the ratio tends to
        // (p+1)/2^p > 1 on (0,1).
        let limit = 1.5 / 2.0f64.sqrt();
        assert!((small_p_ratio(1e6, 0.5) - limit).abs() < 1e-4);
        // Both endpoints of the p-range are tight: at p = 1 the ratio never
        // exceeds 1.
        assert!(small_p_ratio(0.3, 1.0) <= 1.0 + 1e-12);
    }

    #[test]
    fn anderson_examples() {
        let q = segment(&[-1.0], &[1.0]);
        // v = 2e₁, λ = 0, p = 1: 4 ≥ 1.
        let r = anderson_translate_check(&q, &[2.0], 0.0, 1.0, &cfg()).unwrap();
        assert!((r.inequality.lhs - 4.0).abs() < 1e-12);
        assert!((r.inequality.rhs - 1.0).abs() < 1e-12);
        assert!(r.inequality.holds);
        assert_eq!(r.sublevel_grid_equal, Some(false));

        // λ = 1 equality.
        let r = anderson_translate_check(&q, &[2.0], 1.0, 1.0, &cfg()).unwrap();
        assert_eq!(r.inequality.equality_case, EqualityCase::LambdaEndpoint);
        assert!(r.inequality.numerically_equal());

        // v = 0 equality for all λ.
        let r = anderson_translate_check(&q, &[0.0], 0.3, 2.0, &cfg()).unwrap();
        assert_eq!(r.inequality.equality_case, EqualityCase::NumericEqual);
    }

    #[test]
    fn anderson_rejects_asymmetric_base() {
        let q = segment(&[0.0], &[1.0]);
        assert!(matches!(
            anderson_translate_check(&q, &[1.0], 0.5, 1.0, &cfg()),
            Err(LabError::Precondition(_))
        ));
    }
}
