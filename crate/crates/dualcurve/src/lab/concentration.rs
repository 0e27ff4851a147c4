//! Concentration checkers: the prism lower bound, the parallelotope upper
//! bound, the cylinder sharpness sweep, and the Brunn–Minkowski volume spot
//! check used as an engine sanity test.

use serde::Serialize;

use crate::geometry::{
    facets_from_points, minkowski_combination, ConvexBody, Hull, NormalSelection, Subspace,
};
use crate::linalg::{self, Vector};
use crate::measures::{
    cylinder_dcm_subspace, cylinder_dcm_total, cylinder_ratio_limit, dual_curvature,
    subspace_concentration_ratio, MeasureConfig, RatioReport,
};
use crate::quadrature::RngSeed;

use super::{EqualityCase, InequalityReport, LabError, ARITHMETIC_TOL_REL};

/// C̃_q(P,{u,−u}) > (1/q)·C̃_q(P,S^{n−1}) for the prism
/// P = conv(Q−v, Q+v) with symmetric (n−1)-dimensional base Q ⊂ u^⊥ and
/// q > n. Asserted as ≥ with the margin reported.
pub fn prism_bound_check(
    base: &Hull,
    v: &[f64],
    q: f64,
    cfg: &MeasureConfig,
) -> Result<InequalityReport, LabError> {
    let n = base.ambient_dim();
    if !(q > n as f64) {
        return Err(LabError::Precondition(format!(
            "prism bound requires q > n = {n}, got {q}"
        )));
    }
    let (chart, _) = base.chart();
    if chart.dim() != n - 1 {
        return Err(LabError::Precondition(
            "base must be (n−1)-dimensional".into(),
        ));
    }
    if chart.offset_norm() > 1e-10 {
        return Err(LabError::Precondition(
            "base must lie in a hyperplane through the origin".into(),
        ));
    }
    let axis = linalg::hyperplane_normal(&chart.dirs, n)
        .ok_or_else(|| LabError::Precondition("degenerate base directions".into()))?;
    if linalg::dot(&axis, v).abs() <= 1e-12 {
        return Err(LabError::Precondition(
            "apex v must not lie in aff Q".into(),
        ));
    }

    let gens: Vec<Vector> = base
        .points()
        .iter()
        .map(|w| Vector::from_unchecked(linalg::add(w, v)))
        .collect();
    let prism = crate::geometry::SymVPolytope::new(gens)?.build_facets()?;

    let tops: Vec<usize> = prism
        .facets()
        .iter()
        .enumerate()
        .filter(|(_, f)| {
            let d_plus = linalg::dist(&f.normal, &axis);
            let d_minus = linalg::dist(&f.normal, &linalg::scale(&axis, -1.0));
            d_plus.min(d_minus) <= 1e-9
        })
        .map(|(i, _)| i)
        .collect();
    if tops.len() != 2 {
        return Err(LabError::Precondition(format!(
            "expected the two prism top facets with normals ±u, found {}",
            tops.len()
        )));
    }

    let body = ConvexBody::Facets(prism);
    let top_mass = dual_curvature(&body, &NormalSelection::FacetSubset(tops), q, cfg)?;
    let total = dual_curvature(&body, &NormalSelection::FullSphere, q, cfg)?;
    let lhs = top_mass.value;
    let rhs = total.value / q;
    let tol_abs = 1e-9 + 3.0 * (top_mass.abs_error + total.abs_error / q);
    Ok(InequalityReport::evaluate(
        lhs,
        rhs,
        tol_abs,
        ARITHMETIC_TOL_REL,
        EqualityCase::None,
    ))
}

/// Concentration bound for the parallelotope A·[−1,1]ⁿ at q > n, covering
/// the band q ∈ (n, n+1) where no general-body bound is known.
pub fn parallelotope_bound_check(
    a: &[Vec<f64>],
    l: &Subspace,
    q: f64,
    cfg: &MeasureConfig,
) -> Result<RatioReport, LabError> {
    let n = a.len();
    if !(q > n as f64) {
        return Err(LabError::Precondition(format!(
            "parallelotope bound requires q > n = {n}, got {q}"
        )));
    }
    let p = crate::geometry::parallelotope(a)?.build_facets()?;
    Ok(subspace_concentration_ratio(
        &ConvexBody::Facets(p),
        l,
        q,
        cfg,
    )?)
}

/// Monte Carlo volume of a full-dimensional hull by bounding-box rejection.
pub fn hull_mc_volume(hull: &Hull, samples: u64, seed: RngSeed) -> Result<(f64, f64), LabError> {
    let n = hull.ambient_dim();
    if hull.affine_dim() != n {
        return Err(LabError::Precondition(
            "volume requires a full-dimensional hull".into(),
        ));
    }
    let pts: Vec<Vec<f64>> = hull.points().iter().map(|p| p.to_vec()).collect();
    let facets = facets_from_points(&pts, n)?;
    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    for p in &pts {
        for i in 0..n {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    let box_vol: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let mut rng = seed.rng();
    use rand::Rng;
    let mut hits = 0u64;
    let mut x = vec![0.0; n];
    for _ in 0..samples {
        for i in 0..n {
            x[i] = lo[i] + (hi[i] - lo[i]) * rng.random::<f64>();
        }
        if facets
            .iter()
            .all(|f| linalg::dot(&f.normal, &x) <= f.offset + 0.0)
        {
            hits += 1;
        }
    }
    let rate = hits as f64 / samples as f64;
    let value = box_vol * rate;
    let err = box_vol * (rate * (1.0 - rate) / samples as f64).sqrt();
    Ok((value, err))
}

/// vol((1−λ)K₀+λK₁)^{1/n} ≥ (1−λ)·vol(K₀)^{1/n} + λ·vol(K₁)^{1/n} with
/// Monte Carlo volumes; used as an engine sanity check.
pub fn brunn_minkowski_spot_check(
    k0: &Hull,
    k1: &Hull,
    lambda: f64,
    samples: u64,
    seed: RngSeed,
) -> Result<InequalityReport, LabError> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(LabError::Precondition("λ must lie in [0,1]".into()));
    }
    let n = k0.ambient_dim() as f64;
    let combo = minkowski_combination(k0, k1, lambda)?;
    let (v_l, e_l) = hull_mc_volume(&combo, samples, seed)?;
    let (v0, e0) = hull_mc_volume(k0, samples, seed.for_trial(1))?;
    let (v1, e1) = hull_mc_volume(k1, samples, seed.for_trial(2))?;
    let root = |v: f64| v.powf(1.0 / n);
    let droot = |v: f64, e: f64| {
        if v > 0.0 {
            root(v) * e / (n * v)
        } else {
            0.0
        }
    };
    let lhs = root(v_l);
    let rhs = (1.0 - lambda) * root(v0) + lambda * root(v1);
    let tol_abs =
        1e-9 + 3.0 * (droot(v_l, e_l) + (1.0 - lambda) * droot(v0, e0) + lambda * droot(v1, e1));
    let mut report =
        InequalityReport::evaluate(lhs, rhs, tol_abs, ARITHMETIC_TOL_REL, EqualityCase::None);
    if report.margin.abs() <= tol_abs {
        report.equality_case = EqualityCase::NumericEqual;
    }
    Ok(report)
}

/// One row of a cylinder concentration sweep.
#[derive(Debug, Clone, Serialize)]
pub struct CylinderSweepRow {
    pub l: f64,
    pub subspace_measure: f64,
    pub total_measure: f64,
    pub ratio: f64,
    pub bound: f64,
    pub margin: f64,
}

/// Sharpness sweep of the cylinder family K_l = (l·B_k)×B_{n−k} against the
/// limiting ratio (q−n+k)/q.
#[derive(Debug, Clone, Serialize)]
pub struct CylinderSweep {
    pub q: f64,
    pub n: usize,
    pub k: usize,
    pub rows: Vec<CylinderSweepRow>,
    pub limit: f64,
    /// ratio(l) < limit at every grid point.
    pub all_below_limit: bool,
    /// Nondecreasing along the grid within a 1e−12 blip.
    pub monotone_nondecreasing: bool,
    /// |ratio(l_max) − limit|.
    pub final_gap: f64,
}

pub fn cylinder_asymptotics_check(
    q: f64,
    n: usize,
    k: usize,
    l_grid: &[f64],
    cfg: &MeasureConfig,
) -> Result<CylinderSweep, LabError> {
    if l_grid.is_empty() {
        return Err(LabError::InvalidConfig("empty l grid".into()));
    }
    let limit = cylinder_ratio_limit(q, n, k)?;
    let mut rows = Vec::with_capacity(l_grid.len());
    let mut all_below = true;
    let mut monotone = true;
    let mut prev = f64::NEG_INFINITY;
    for &l in l_grid {
        let sub = cylinder_dcm_subspace(q, n, k, l, cfg)?;
        let tot = cylinder_dcm_total(q, n, k, l, cfg)?;
        let ratio = sub.value / tot.value;
        if !(ratio < limit) {
            all_below = false;
        }
        if ratio < prev - 1e-12 {
            monotone = false;
        }
        prev = ratio;
        rows.push(CylinderSweepRow {
            l,
            subspace_measure: sub.value,
            total_measure: tot.value,
            ratio,
            bound: limit,
            margin: limit - ratio,
        });
    }
    let final_gap = (rows.last().unwrap().ratio - limit).abs();
    Ok(CylinderSweep {
        q,
        n,
        k,
        rows,
        limit,
        all_below_limit: all_below,
        monotone_nondecreasing: monotone,
        final_gap,
    })
}

/// Geometric grid from `a` to `b` with `m` points.
pub fn geomspace(a: f64, b: f64, m: usize) -> Vec<f64> {
    if m == 1 {
        return vec![a];
    }
    let (la, lb) = (a.ln(), b.ln());
    (0..m)
        .map(|i| (la + (lb - la) * i as f64 / (m - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> MeasureConfig {
        MeasureConfig::default()
    }

    fn square_base() -> Hull {
        Hull::from_coords(vec![
            vec![1.0, 1.0, 0.0],
            vec![1.0, -1.0, 0.0],
            vec![-1.0, -1.0, 0.0],
            vec![-1.0, 1.0, 0.0],
        ])
        .unwrap()
    }

    #[test]
    fn prism_cube_symmetry_case() {
        // Q = [−1,1]²×{0}, v = e₃, q = 4: the cube concentrates 1/3 of its
        // mass on {±e₃} while the bound side is 1/4 of the total.
        let r = prism_bound_check(&square_base(), &[0.0, 0.0, 1.0], 4.0, &cfg()).unwrap();
        assert!(r.holds);
        let ratio = r.lhs / (r.rhs * 4.0);
        assert!((ratio - 1.0 / 3.0).abs() < 1e-9, "ratio {ratio}");
        assert!(r.margin > 0.0);
    }

    #[test]
    fn prism_sheared_apex() {
        let r = prism_bound_check(&square_base(), &[0.5, 0.0, 1.0], 4.0, &cfg()).unwrap();
        assert!(r.holds && r.margin > 0.0);
    }

    #[test]
    fn prism_rejects_in_plane_apex() {
        assert!(matches!(
            prism_bound_check(&square_base(), &[1.0, 1.0, 0.0], 4.0, &cfg()),
            Err(LabError::Precondition(_))
        ));
    }

    #[test]
    fn parallelotope_cube_open_band() {
        // A = I, L = span(e₁), q = n + 0.5: cube ratio 1/n < 1.5/(n+0.5).
        let a = vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        let l = Subspace::coordinate(3, &[0]).unwrap();
        let r = parallelotope_bound_check(&a, &l, 3.5, &cfg()).unwrap();
        assert!((r.ratio - 1.0 / 3.0).abs() < 1e-9);
        assert!((r.bound.unwrap() - 1.5 / 3.5).abs() < 1e-12);
        assert!(r.satisfied);
        assert_eq!(r.bound_kind, crate::measures::BoundKind::Parallelotope);
    }

    #[test]
    fn bm_equality_for_identical_bodies() {
        let cube = crate::geometry::SymVPolytope::new(vec![
            Vector::from_slice(&[1.0, 1.0]).unwrap(),
            Vector::from_slice(&[1.0, -1.0]).unwrap(),
        ])
        .unwrap()
        .to_hull();
        let r = brunn_minkowski_spot_check(&cube, &cube, 0.5, 50_000, RngSeed::new(3)).unwrap();
        assert!(r.holds);
        assert_eq!(r.equality_case, EqualityCase::NumericEqual);
    }

    #[test]
    fn bm_homothets_are_equality() {
        let cube = crate::geometry::SymVPolytope::new(vec![
            Vector::from_slice(&[1.0, 1.0]).unwrap(),
            Vector::from_slice(&[1.0, -1.0]).unwrap(),
        ])
        .unwrap()
        .to_hull();
        let double = cube.scale(2.0);
        let r = brunn_minkowski_spot_check(&cube, &double, 0.5, 50_000, RngSeed::new(4)).unwrap();
        assert!(r.holds);
        assert!(r.margin.abs() <= r.tol_abs, "margin {}", r.margin);
    }

    #[test]
    fn cylinder_sweep_shape() {
        let grid = geomspace(1.0, 1000.0, 13);
        assert_eq!(grid.len(), 13);
        assert!((grid[0] - 1.0).abs() < 1e-12 && (grid[12] - 1000.0).abs() < 1e-9);
        let sweep = cylinder_asymptotics_check(4.0, 3, 1, &grid, &cfg()).unwrap();
        assert!(sweep.all_below_limit);
        assert!(sweep.monotone_nondecreasing);
        assert!(sweep.final_gap <= 0.01, "gap {}", sweep.final_gap);
        assert!((sweep.limit - 0.5).abs() < 1e-15);
        let first = sweep.rows.first().unwrap();
        assert!(first.ratio < sweep.limit);
    }
}
