//! Moment integrals M_p(K) = ∫_K |x|^p dH^k(x) over the intrinsic Hausdorff
//! measure of a k-dimensional body, with |x| the ambient Euclidean norm.
//!
//! Bodies reduce to an isometric chart y ↦ offset + Σ yᵢdᵢ with
//! offset ⊥ span(dirs), so |x|² = c² + |y|² for c = |offset|, and the
//! integrand in chart coordinates is (c² + |y|²)^{p/2}.
//!
//! Engines: exact power formulas for segments through the origin, boundary
//! decompositions with 1D Gauss–Legendre for polygons (using the radial
//! field F(y) = ψ(|y|²)/|y|²·y whose divergence is exactly the integrand),
//! recursive facet reduction or simplex quadrature for 3- and 4-dimensional
//! hulls, and Monte Carlo as an opt-in fallback for full-dimensional bodies.

use crate::geometry::{facets_from_points, ConvexBody, Hull};
use crate::linalg;
use crate::quadrature::{
    gauss_legendre_2d, gauss_legendre_nodes, mc_body_integrate, omega, simplex_integrate,
};

use super::{EngineChoice, EngineTag, MeasureConfig, MeasureError, MeasureEstimate};

/// ψ(ρ)/ρ for ψ(ρ) = ((c²+ρ)^{(p+2)/2} − c^{p+2})/(p+2), evaluated stably
/// via ln_1p/exp_m1 (the naive difference cancels when ρ ≪ c²).
fn psi_over_rho(rho: f64, c: f64, p: f64) -> f64 {
    let m = (p + 2.0) / 2.0;
    if c == 0.0 {
        return rho.powf(m - 1.0) / (p + 2.0);
    }
    if rho == 0.0 {
        return c.powf(p) / 2.0;
    }
    let c2 = c * c;
    c2.powf(m) * (m * (rho / c2).ln_1p()).exp_m1() / ((p + 2.0) * rho)
}

fn gl_edge_integral<F: Fn(f64) -> f64>(f: F, nodes: usize) -> (f64, f64) {
    let eval = |m: usize| -> f64 {
        let (xs, ws) = gauss_legendre_nodes(m);
        xs.iter().zip(&ws).map(|(&x, &w)| w * f(x)).sum()
    };
    let v = eval(nodes);
    let refined = eval(2 * nodes);
    (v, (v - refined).abs())
}

/// ∫ over the segment [lo, hi] of (c² + t²)^{p/2} dt; exact when c = 0.
fn segment_moment(lo: f64, hi: f64, c: f64, p: f64, gl_nodes: usize) -> (f64, f64, bool) {
    if c == 0.0 {
        let g = |t: f64| t.signum() * t.abs().powf(p + 1.0) / (p + 1.0);
        let v = g(hi) - g(lo);
        (v, 1e-14 * v.abs(), true)
    } else {
        let span = hi - lo;
        let (v, e) = gl_edge_integral(
            |x| {
                let t = lo + span * x;
                (c * c + t * t).powf(p / 2.0) * span
            },
            gl_nodes,
        );
        (v, e, false)
    }
}

/// ∫ over conv(points) ⊂ ℝ^k of (c² + |y|²)^{p/2} dH^k(y), full-dimensional
/// in the chart. Returns (value, abs_error).
fn chart_moment(
    points: &[Vec<f64>],
    k: usize,
    c: f64,
    p: f64,
    cfg: &MeasureConfig,
) -> Result<(f64, f64), MeasureError> {
    match k {
        0 => Ok((c.powf(p), 0.0)),
        1 => {
            let lo = points.iter().map(|y| y[0]).fold(f64::INFINITY, f64::min);
            let hi = points
                .iter()
                .map(|y| y[0])
                .fold(f64::NEG_INFINITY, f64::max);
            let (v, e, _) = segment_moment(lo, hi, c, p, cfg.gl_nodes);
            Ok((v, e))
        }
        2 => polygon_moment(points, c, p, cfg),
        3 | 4 => cell_moment(points, k, c, p, cfg),
        _ => Err(MeasureError::InvalidParameter(format!(
            "moment integrals support intrinsic dimension ≤ 4, got {k}"
        ))),
    }
}

/// Boundary decomposition for polygons: the field F(y) = (ψ(|y|²)/|y|²)·y
/// satisfies div F = (c²+|y|²)^{p/2}, so the moment is
/// Σ_edges h_E·∫_E ψ(|z|²)/|z|² dH¹(z). Edges whose line passes through the
/// origin have h_E = 0 and drop out, which removes the singular case.
fn polygon_moment(
    points: &[Vec<f64>],
    c: f64,
    p: f64,
    cfg: &MeasureConfig,
) -> Result<(f64, f64), MeasureError> {
    let hull = linalg::hull_2d(points);
    if hull.len() < 3 {
        return Err(MeasureError::InvalidParameter(
            "degenerate polygon in chart coordinates".into(),
        ));
    }
    let scale_ref = hull
        .iter()
        .map(|v| linalg::norm(v))
        .fold(0.0f64, f64::max)
        .max(1e-12);
    let m = hull.len();
    let mut value = 0.0;
    let mut err = 0.0;
    for i in 0..m {
        let a = &hull[i];
        let b = &hull[(i + 1) % m];
        let d = linalg::sub(b, a);
        let len = linalg::norm(&d);
        if len <= 1e-14 * scale_ref {
            continue;
        }
        // Outward normal of a counterclockwise cycle.
        let nu = [d[1] / len, -d[0] / len];
        let h = nu[0] * a[0] + nu[1] * a[1];
        if h.abs() <= 1e-12 * scale_ref {
            continue;
        }
        let (v, e) = gl_edge_integral(
            |t| {
                let z0 = a[0] + t * d[0];
                let z1 = a[1] + t * d[1];
                psi_over_rho(z0 * z0 + z1 * z1, c, p) * len
            },
            cfg.gl_nodes,
        );
        value += h * v;
        err += h.abs() * e;
    }
    Ok((value, err))
}

/// 3- and 4-dimensional chart hulls. When the affine hull passes through the
/// origin (c = 0) the radial divergence identity reduces the moment to the
/// boundary facets: M = 1/(p+k)·Σ_F h_F·∫_F |z|^p; facets in planes through
/// the origin drop out. Otherwise the integrand is smooth and the hull is
/// coned from its centroid into simplices for Grundmann–Möller quadrature.
fn cell_moment(
    points: &[Vec<f64>],
    k: usize,
    c: f64,
    p: f64,
    cfg: &MeasureConfig,
) -> Result<(f64, f64), MeasureError> {
    let facets = facets_from_points(points, k)?;
    let scale_ref = points
        .iter()
        .map(|v| linalg::norm(v))
        .fold(0.0f64, f64::max)
        .max(1e-12);
    if c <= 1e-12 * scale_ref {
        let mut value = 0.0;
        let mut err = 0.0;
        for f in &facets {
            if f.offset.abs() <= 1e-12 * scale_ref {
                continue;
            }
            let sub = Hull::from_coords(f.vertices.clone())?;
            let (chart, local) = sub.chart();
            if chart.dim() != k - 1 {
                return Err(MeasureError::InvalidParameter(
                    "degenerate facet in moment reduction".into(),
                ));
            }
            let (v, e) = chart_moment(&local, k - 1, chart.offset_norm(), p, cfg)?;
            value += f.offset * v;
            err += f.offset.abs() * e;
        }
        Ok((value / (p + k as f64), err / (p + k as f64)))
    } else {
        if k != 3 {
            // A 4-dimensional hull in ℝ⁴ always has its affine hull through
            // the origin, so this branch is unreachable for k = 4.
            return Err(MeasureError::InvalidParameter(
                "smooth-path moment supported for 3-dimensional cells only".into(),
            ));
        }
        let centroid: Vec<f64> = (0..k)
            .map(|i| points.iter().map(|v| v[i]).sum::<f64>() / points.len() as f64)
            .collect();
        let mut value = 0.0;
        let mut err = 0.0;
        for f in &facets {
            for tri in fan_polygon_3d(&f.vertices) {
                let mut simplex = tri;
                simplex.push(centroid.clone());
                let r = simplex_integrate(
                    |y| (c * c + linalg::norm_sq(y)).powf(p / 2.0),
                    &simplex,
                    cfg.simplex_degree,
                )?;
                value += r.value;
                err += r.abs_error;
            }
        }
        Ok((value, err))
    }
}

/// Fan a planar convex polygon embedded in ℝ³ around its centroid.
fn fan_polygon_3d(verts: &[Vec<f64>]) -> Vec<Vec<Vec<f64>>> {
    if verts.len() == 3 {
        return vec![verts.to_vec()];
    }
    let centroid: Vec<f64> = (0..verts[0].len())
        .map(|i| verts.iter().map(|v| v[i]).sum::<f64>() / verts.len() as f64)
        .collect();
    let diffs: Vec<Vec<f64>> = verts.iter().map(|v| linalg::sub(v, &centroid)).collect();
    let basis = linalg::orthonormalize(&diffs, 1e-12);
    let mut keyed: Vec<(f64, usize)> = diffs
        .iter()
        .enumerate()
        .map(|(i, d)| {
            (
                linalg::dot(d, &basis[1]).atan2(linalg::dot(d, &basis[0])),
                i,
            )
        })
        .collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
    let m = keyed.len();
    (0..m)
        .map(|i| {
            vec![
                centroid.clone(),
                verts[keyed[i].1].clone(),
                verts[keyed[(i + 1) % m].1].clone(),
            ]
        })
        .collect()
}

/// M_p over the convex hull of a point set of any intrinsic dimension ≤ 4.
pub fn moment_integral(
    hull: &Hull,
    p: f64,
    cfg: &MeasureConfig,
) -> Result<MeasureEstimate, MeasureError> {
    if !(p >= 0.0) {
        return Err(MeasureError::InvalidParameter(format!(
            "moment order p must be ≥ 0, got {p}"
        )));
    }
    let (chart, local) = hull.chart();
    let k = chart.dim();
    let c = chart.offset_norm();
    let (value, abs_error) = chart_moment(&local, k, c, p, cfg)?;
    let exactish = k == 0 || (k == 1 && c == 0.0);
    Ok(MeasureEstimate {
        value,
        abs_error,
        engine: if exactish {
            EngineTag::ClosedForm
        } else {
            EngineTag::FacetExact
        },
        q: p,
        body: format!(
            "hull({} pts, dim {k} in ℝ^{})",
            hull.points().len(),
            hull.ambient_dim()
        ),
        selection: "moment".to_string(),
        nodes_or_samples: 0,
    })
}

/// M_p for the symmetric body representations: closed form for balls,
/// Gauss–Legendre for cylinders, the hull engine for polytopes, and Monte
/// Carlo when explicitly requested.
pub fn moment_of_body(
    body: &ConvexBody,
    p: f64,
    cfg: &MeasureConfig,
) -> Result<MeasureEstimate, MeasureError> {
    if !(p >= 0.0) {
        return Err(MeasureError::InvalidParameter(format!(
            "moment order p must be ≥ 0, got {p}"
        )));
    }
    if cfg.engine == EngineChoice::BodyMc {
        let r = mc_body_integrate(|x| linalg::norm(x).powf(p), body, cfg.samples, cfg.seed)?;
        return Ok(MeasureEstimate {
            value: r.value,
            abs_error: r.abs_error,
            engine: EngineTag::BodyMc,
            q: p,
            body: body.describe(),
            selection: "moment".to_string(),
            nodes_or_samples: r.nodes_or_samples,
        });
    }
    match body {
        ConvexBody::Ball(b) => {
            let n = b.n as f64;
            let value = n * omega(b.n) * b.r.powf(n + p) / (n + p);
            Ok(MeasureEstimate {
                value,
                abs_error: 1e-14 * value,
                engine: EngineTag::ClosedForm,
                q: p,
                body: body.describe(),
                selection: "moment".to_string(),
                nodes_or_samples: 0,
            })
        }
        ConvexBody::Cylinder(c) => {
            let (n, k, l) = (c.n, c.k, c.l);
            let pref = k as f64 * omega(k) * (n - k) as f64 * omega(n - k) * l.powi(k as i32);
            let integral = gauss_legendre_2d(
                |s, t| {
                    let sk = if k == 1 { 1.0 } else { s.powf(k as f64 - 1.0) };
                    let tk = if n - k == 1 {
                        1.0
                    } else {
                        t.powf((n - k) as f64 - 1.0)
                    };
                    sk * tk * (l * l * s * s + t * t).powf(p / 2.0)
                },
                cfg.gl_nodes,
            )?;
            Ok(MeasureEstimate {
                value: pref * integral.value,
                abs_error: pref * integral.abs_error,
                engine: EngineTag::ClosedForm,
                q: p,
                body: body.describe(),
                selection: "moment".to_string(),
                nodes_or_samples: integral.nodes_or_samples,
            })
        }
        ConvexBody::VPolytope(poly) => moment_integral(&poly.to_hull(), p, cfg),
        ConvexBody::AxisBox { .. } | ConvexBody::Facets(_) | ConvexBody::HPolytope(_) => {
            let p_form = body.to_facet_form()?;
            let hull = Hull::from_coords(p_form.vertex_set())?;
            moment_integral(&hull, p, cfg)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Ball;
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
    fn interval_power_formula() {
        // K = [ε, ε+1] ⊂ ℝ: M_p = ((ε+1)^{p+1} − ε^{p+1})/(p+1).
        for (eps, p) in [(0.01f64, 0.5f64), (0.3, 2.0), (1.7, 1.0), (0.0, 3.5)] {
            let h = segment(&[eps], &[eps + 1.0]);
            let m = moment_integral(&h, p, &cfg()).unwrap();
            let expect = ((eps + 1.0).powf(p + 1.0) - eps.powf(p + 1.0)) / (p + 1.0);
            assert!(
                (m.value - expect).abs() <= 1e-12 * expect,
                "eps={eps} p={p}: {} vs {expect}",
                m.value
            );
        }
        let h = segment(&[0.0], &[1.0]);
        let m = moment_integral(&h, 1.0, &cfg()).unwrap();
        assert!((m.value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn straddling_segment_exact_split() {
        // ∫_{−1}^{2} |t|^p dt = (1 + 2^{p+1})/(p+1).
        let h = segment(&[-1.0], &[2.0]);
        let p = 1.5;
        let m = moment_integral(&h, p, &cfg()).unwrap();
        let expect = (1.0 + 2.0f64.powf(p + 1.0)) / (p + 1.0);
        assert!((m.value - expect).abs() < 1e-13);
    }

    #[test]
    fn segment_in_space_on_line_through_origin() {
        // [1,2]·u for unit u: chart offset is 0, exact power path.
        let u = [0.6, 0.8];
        let h = segment(&[0.6, 0.8], &[1.2, 1.6]);
        let m = moment_integral(&h, 1.0, &cfg()).unwrap();
        assert!((m.value - 1.5).abs() < 1e-13, "{} along {u:?}", m.value);
        assert_eq!(m.engine, EngineTag::ClosedForm);
    }

    #[test]
    fn offset_segment_matches_quadrature_oracle() {
        // Segment from (1,0) to (1,1): ∫₀¹ √(1+t²) dt at p = 1.
        let h = segment(&[1.0, 0.0], &[1.0, 1.0]);
        let m = moment_integral(&h, 1.0, &cfg()).unwrap();
        let expect = (2.0f64.sqrt() + 1.0f64.asinh()) / 2.0;
        assert!((m.value - expect).abs() < 1e-13);
    }

    #[test]
    fn unit_disc_p1() {
        let disc = ConvexBody::Ball(Ball::new(2, 1.0).unwrap());
        let m = moment_of_body(&disc, 1.0, &cfg()).unwrap();
        assert!((m.value - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-13);
    }

    #[test]
    fn square_moment_against_closed_form() {
        // ∫_{[−1,1]²} |x|² dx = 8/3 (separable).
        let square = ConvexBody::axis_box(vec![1.0, 1.0]).unwrap();
        let m = moment_of_body(&square, 2.0, &cfg()).unwrap();
        assert!((m.value - 8.0 / 3.0).abs() < 1e-11, "{}", m.value);
        // ∫_{[0,1]×[−1,1]} |x| dx against a dense Gauss–Legendre oracle.
        let shifted = Hull::from_coords(vec![
            vec![0.0, -1.0],
            vec![1.0, -1.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ])
        .unwrap();
        let m = moment_integral(&shifted, 1.0, &cfg()).unwrap();
        let oracle = gauss_legendre_2d(
            |s, t| {
                let y = 2.0 * t - 1.0;
                ((s * s + y * y).sqrt()) * 2.0
            },
            120,
        )
        .unwrap();
        assert!(
            (m.value - oracle.value).abs() <= 1e-10 + 3.0 * (m.abs_error + oracle.abs_error),
            "{} vs {}",
            m.value,
            oracle.value
        );
    }

    #[test]
    fn polygon_moment_of_symmetric_polygon_through_origin() {
        // Square [−1,1]² at p = 1, c = 0 path (ambient = chart):
        // ∫_{[−1,1]²}|x| dx = 8·∫_{triangle}… known value  (8/3)(√2 + asinh 1)/2.
        let square = Hull::from_coords(vec![
            vec![1.0, 1.0],
            vec![1.0, -1.0],
            vec![-1.0, -1.0],
            vec![-1.0, 1.0],
        ])
        .unwrap();
        let m = moment_integral(&square, 1.0, &cfg()).unwrap();
        let expect = 4.0 / 3.0 * (2.0f64.sqrt() + 1.0f64.asinh());
        assert!((m.value - expect).abs() < 1e-12, "{} vs {expect}", m.value);
    }

    #[test]
    fn translated_polygon_in_parallel_plane() {
        // Triangle in the plane z = 2: M_0 is the area.
        let tri = Hull::from_coords(vec![
            vec![0.0, 0.0, 2.0],
            vec![1.0, 0.0, 2.0],
            vec![0.0, 1.0, 2.0],
        ])
        .unwrap();
        let m = moment_integral(&tri, 0.0, &cfg()).unwrap();
        assert!((m.value - 0.5).abs() < 1e-12);
        // And M_2 = ∫ (4 + |y|²) over the triangle = 4·area + ∫|y|².
        let m2 = moment_integral(&tri, 2.0, &cfg()).unwrap();
        let inner = 1.0 / 6.0; // ∫ x² = ∫ y² = 1/12 each over this triangle
        assert!((m2.value - (2.0 + inner)).abs() < 1e-11, "{}", m2.value);
    }

    #[test]
    fn cube_moment_p1_matches_mc() {
        let cube = ConvexBody::axis_box(vec![1.0, 1.0, 1.0]).unwrap();
        let det = moment_of_body(&cube, 1.0, &cfg()).unwrap();
        let mc = moment_of_body(
            &cube,
            1.0,
            &cfg()
                .with_engine(EngineChoice::BodyMc)
                .with_samples(200_000),
        )
        .unwrap();
        assert!(
            (det.value - mc.value).abs() <= 3.0 * (det.abs_error + mc.abs_error),
            "{} vs {} ± {}",
            det.value,
            mc.value,
            mc.abs_error
        );
        assert!(det.abs_error < 1e-8 * det.value);
    }

    #[test]
    fn cylinder_moment_volume_check() {
        // p = 0 gives the volume ω_k l^k ω_{n−k}.
        let cyl = ConvexBody::Cylinder(crate::geometry::Cylinder::new(3, 1, 4.0).unwrap());
        let m = moment_of_body(&cyl, 0.0, &cfg()).unwrap();
        let expect = 2.0 * 4.0 * std::f64::consts::PI;
        assert!((m.value - expect).abs() < 1e-10 * expect);
    }

    #[test]
    fn tetrahedral_cell_smooth_path() {
        // Tetrahedron shifted away from the origin in ℝ³ (c = 0 ambient
        // chart but facets at positive distance): both paths are exercised
        // via a translate trick, comparing against Monte Carlo.
        let pts = vec![
            vec![2.0, 0.0, 0.0],
            vec![3.0, 0.0, 0.0],
            vec![2.0, 1.0, 0.0],
            vec![2.0, 0.0, 1.0],
        ];
        let hull = Hull::from_coords(pts).unwrap();
        let m = moment_integral(&hull, 1.5, &cfg()).unwrap();
        // Rough oracle by dense simplex quadrature over the tetrahedron.
        let oracle = simplex_integrate(
            |x| linalg::norm(x).powf(1.5),
            &[
                vec![2.0, 0.0, 0.0],
                vec![3.0, 0.0, 0.0],
                vec![2.0, 1.0, 0.0],
                vec![2.0, 0.0, 1.0],
            ],
            21,
        )
        .unwrap();
        assert!(
            (m.value - oracle.value).abs() <= 1e-9 + 3.0 * (m.abs_error + oracle.abs_error),
            "{} vs {}",
            m.value,
            oracle.value
        );
    }

    #[test]
    fn negative_p_rejected() {
        let h = segment(&[0.0], &[1.0]);
        assert!(moment_integral(&h, -0.5, &cfg()).is_err());
    }
}
