//! Scalar inequalities: the majorization inequality for convex nondecreasing
//! functions and the power estimate for convex combinations with its
//! three-way equality classification.

use super::{EqualityCase, InequalityReport, LabError, ARITHMETIC_TOL_REL};

/// Convex nondecreasing test functions.
#[derive(Debug, Clone)]
pub enum ConvexFn {
    /// t ↦ t^p on [0, ∞), p ≥ 1.
    Power(f64),
    /// t ↦ e^t.
    Exp,
    /// Piecewise-linear interpolation of (t, f(t)) pairs, extended by its
    /// end slopes; must be nondecreasing with nondecreasing slopes.
    Table(Vec<(f64, f64)>),
}

impl ConvexFn {
    pub fn validate(&self) -> Result<(), LabError> {
        match self {
            ConvexFn::Power(p) => {
                if *p >= 1.0 {
                    Ok(())
                } else {
                    Err(LabError::Precondition(format!(
                        "power {p} < 1 is not convex nondecreasing on [0,∞)"
                    )))
                }
            }
            ConvexFn::Exp => Ok(()),
            ConvexFn::Table(pts) => {
                if pts.len() < 2 {
                    return Err(LabError::Precondition("table needs ≥ 2 points".into()));
                }
                let mut prev_slope = f64::NEG_INFINITY;
                for w in pts.windows(2) {
                    let dt = w[1].0 - w[0].0;
                    let dv = w[1].1 - w[0].1;
                    if dt <= 0.0 {
                        return Err(LabError::Precondition(
                            "table abscissae must increase".into(),
                        ));
                    }
                    let slope = dv / dt;
                    if dv < 0.0 || slope < prev_slope - 1e-12 * slope.abs().max(1.0) {
                        return Err(LabError::Precondition(
                            "table must be nondecreasing and convex".into(),
                        ));
                    }
                    prev_slope = slope;
                }
                Ok(())
            }
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            ConvexFn::Power(p) => t.max(0.0).powf(*p),
            ConvexFn::Exp => t.exp(),
            ConvexFn::Table(pts) => {
                let first = pts[0];
                let last = pts[pts.len() - 1];
                if t <= first.0 {
                    let s = (pts[1].1 - first.1) / (pts[1].0 - first.0);
                    return first.1 + s * (t - first.0);
                }
                if t >= last.0 {
                    let prev = pts[pts.len() - 2];
                    let s = (last.1 - prev.1) / (last.0 - prev.0);
                    return last.1 + s * (t - last.0);
                }
                let i = pts.partition_point(|&(x, _)| x <= t).max(1) - 1;
                let (x0, y0) = pts[i];
                let (x1, y1) = pts[i + 1];
                y0 + (y1 - y0) * (t - x0) / (x1 - x0)
            }
        }
    }
}

/// Majorization inequality: for nonincreasing xs dominating nonincreasing ys
/// in every prefix sum, Σf(xᵢ) ≥ Σf(yᵢ) for convex nondecreasing f.
/// A violated precondition is an error, not an inequality failure.
pub fn karamata_check(xs: &[f64], ys: &[f64], f: &ConvexFn) -> Result<InequalityReport, LabError> {
    f.validate()?;
    if xs.is_empty() || xs.len() != ys.len() {
        return Err(LabError::Precondition(
            "xs and ys must be nonempty lists of equal length".into(),
        ));
    }
    let scale = xs
        .iter()
        .chain(ys)
        .fold(0.0f64, |m, &v| m.max(v.abs()))
        .max(1.0);
    let tol = 1e-12 * scale;
    for w in xs.windows(2) {
        if w[1] > w[0] + tol {
            return Err(LabError::Precondition("xs must be nonincreasing".into()));
        }
    }
    for w in ys.windows(2) {
        if w[1] > w[0] + tol {
            return Err(LabError::Precondition("ys must be nonincreasing".into()));
        }
    }
    let mut px = 0.0;
    let mut py = 0.0;
    for (i, (&x, &y)) in xs.iter().zip(ys).enumerate() {
        px += x;
        py += y;
        if px < py - tol {
            return Err(LabError::Precondition(format!(
                "prefix-sum dominance fails at index {i}: {px} < {py}"
            )));
        }
    }
    if matches!(f, ConvexFn::Power(_)) && xs.iter().chain(ys).any(|&v| v < -tol) {
        return Err(LabError::Precondition(
            "power functions require nonnegative inputs".into(),
        ));
    }
    let lhs: f64 = xs.iter().map(|&x| f.eval(x)).sum();
    let rhs: f64 = ys.iter().map(|&y| f.eval(y)).sum();
    let equal_inputs = xs
        .iter()
        .zip(ys)
        .all(|(&x, &y)| (x - y).abs() <= 1e-12 * scale);
    let mut report =
        InequalityReport::evaluate(lhs, rhs, 0.0, ARITHMETIC_TOL_REL, EqualityCase::None);
    if equal_inputs || report.numerically_equal() {
        report.equality_case = EqualityCase::NumericEqual;
    }
    Ok(report)
}

/// |λz+(1−λ)z̄|^p + |λz̄+(1−λ)z|^p ≥ |2λ−1|^p·(|z|^p+|z̄|^p), p ≥ 1,
/// with equality iff (i) λ∈{0,1}, (ii) z̄ = −z, or (iii) p = 1, z·z̄ < 0 and
/// max{λ,1−λ} ≥ max{|z|,|z̄|}/(|z|+|z̄|). The threshold in (iii) is a
/// knife-edge; it is admitted with 1e−12 relative tolerance.
pub fn scalar_combination_check(
    z: f64,
    z_bar: f64,
    lambda: f64,
    p: f64,
) -> Result<InequalityReport, LabError> {
    if !(p >= 1.0) {
        return Err(LabError::Precondition(format!("p must be ≥ 1, got {p}")));
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(LabError::Precondition(format!(
            "λ must lie in [0,1], got {lambda}"
        )));
    }
    let lhs = (lambda * z + (1.0 - lambda) * z_bar).abs().powf(p)
        + (lambda * z_bar + (1.0 - lambda) * z).abs().powf(p);
    let rhs = (2.0 * lambda - 1.0).abs().powf(p) * (z.abs().powf(p) + z_bar.abs().powf(p));

    let scale = z.abs().max(z_bar.abs()).max(1e-300);
    let equality_case = if lambda == 0.0 || lambda == 1.0 {
        EqualityCase::LambdaEndpoint
    } else if (z_bar + z).abs() <= 1e-12 * scale {
        EqualityCase::Antipodal
    } else if p == 1.0 && z * z_bar < 0.0 {
        let threshold = z.abs().max(z_bar.abs()) / (z.abs() + z_bar.abs());
        if lambda.max(1.0 - lambda) >= threshold * (1.0 - 1e-12) {
            EqualityCase::Threshold
        } else {
            EqualityCase::None
        }
    } else {
        EqualityCase::None
    };
    Ok(InequalityReport::evaluate(
        lhs,
        rhs,
        1e-300,
        ARITHMETIC_TOL_REL,
        equality_case,
    ))
}
