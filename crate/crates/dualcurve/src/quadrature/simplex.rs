//! Grundmann–Möller quadrature on simplices of any intrinsic dimension,
//! plus facet triangulation.

use std::cell::RefCell;
use std::collections::HashMap;

use crate::geometry::Facet;
use crate::linalg::{self, simplex_volume};

use super::{QuadEngine, QuadratureError, QuadratureResult};

/// Barycentric nodes (d+1 coordinates each) and weights summing to the unit
/// simplex volume 1/d!.
#[derive(Clone)]
struct SimplexRule {
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for head in 0..=total {
        for mut tail in compositions(total - head, parts - 1) {
            let mut c = Vec::with_capacity(parts);
            c.push(head);
            c.append(&mut tail);
            out.push(c);
        }
    }
    out
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// Grundmann–Möller rule of index `s` on the d-simplex, exact for total
/// degree ≤ 2s+1.
fn grundmann_moeller(dim: usize, s: usize) -> SimplexRule {
    let d = dim;
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for i in 0..=s {
        let q = (d + 1 + 2 * (s - i)) as f64;
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let w = sign * 0.25f64.powi(s as i32) * q.powi((2 * s + 1) as i32)
            / (factorial(i) * factorial(d + 1 + 2 * s - i));
        for beta in compositions(s - i, d + 1) {
            nodes.push(beta.iter().map(|&b| (2.0 * b as f64 + 1.0) / q).collect());
            weights.push(w);
        }
    }
    SimplexRule { nodes, weights }
}

fn cached_rule(dim: usize, s: usize) -> SimplexRule {
    thread_local! {
        static CACHE: RefCell<HashMap<(usize, usize), SimplexRule>> = RefCell::new(HashMap::new());
    }
    CACHE.with(|c| {
        c.borrow_mut()
            .entry((dim, s))
            .or_insert_with(|| grundmann_moeller(dim, s))
            .clone()
    })
}

fn apply_rule<F: Fn(&[f64]) -> f64>(
    rule: &SimplexRule,
    vertices: &[Vec<f64>],
    vol: f64,
    d: usize,
    f: &F,
) -> f64 {
    let ambient = vertices[0].len();
    let mut x = vec![0.0; ambient];
    let mut sum = 0.0;
    for (node, &w) in rule.nodes.iter().zip(&rule.weights) {
        x.iter_mut().for_each(|c| *c = 0.0);
        for (lambda, v) in node.iter().zip(vertices) {
            for (xi, vi) in x.iter_mut().zip(v.iter()) {
                *xi += lambda * vi;
            }
        }
        sum += w * f(&x);
    }
    // The rule integrates over the unit simplex of volume 1/d!.
    vol * factorial(d) * sum
}

/// Fixed-rule polynomial-exact quadrature of `f` over the simplex with the
/// given vertex list (intrinsic dimension = vertices.len() − 1, embedded in
/// any ℝⁿ). The error estimate compares the requested rule against the rule
/// two degrees lower (one higher when the requested rule is the lowest).
pub fn simplex_integrate<F: Fn(&[f64]) -> f64>(
    f: F,
    vertices: &[Vec<f64>],
    degree: usize,
) -> Result<QuadratureResult, QuadratureError> {
    if !(1..=25).contains(&degree) {
        return Err(QuadratureError::BadDegree(degree));
    }
    let d = vertices.len() - 1;
    if d == 0 {
        return Err(QuadratureError::DegenerateSimplex);
    }
    let vol = simplex_volume(vertices);
    let edge_scale = vertices[1..]
        .iter()
        .map(|v| linalg::dist(v, &vertices[0]))
        .fold(0.0f64, f64::max);
    if vol <= 1e-300 || edge_scale <= 0.0 || vol < 1e-14 * edge_scale.powi(d as i32) {
        return Err(QuadratureError::DegenerateSimplex);
    }

    let s = degree / 2;
    let main = cached_rule(d, s);
    let value = apply_rule(&main, vertices, vol, d, &f);
    let check_s = if s == 0 { 1 } else { s - 1 };
    let check = cached_rule(d, check_s);
    let check_value = apply_rule(&check, vertices, vol, d, &f);
    Ok(QuadratureResult {
        value,
        abs_error: (value - check_value).abs(),
        nodes_or_samples: (main.nodes.len() + check.nodes.len()) as u64,
        engine: QuadEngine::Simplex,
    })
}

/// Partitions a facet into (n−1)-simplices:
/// segments are returned as-is, polygons fan around their centroid after an
/// angular sort, and 3-dimensional facets cone their centroid over a fan
/// triangulation of each ordered ridge cycle.
pub fn triangulate_facet(facet: &Facet) -> Result<Vec<Vec<Vec<f64>>>, QuadratureError> {
    let n = facet.normal.dim();
    let verts: Vec<Vec<f64>> = facet.vertices.iter().map(|v| v.to_vec()).collect();
    match n - 1 {
        1 => {
            if verts.len() != 2 {
                return Err(QuadratureError::DegenerateSimplex);
            }
            Ok(vec![verts])
        }
        2 => {
            if verts.len() < 3 {
                return Err(QuadratureError::DegenerateSimplex);
            }
            if verts.len() == 3 {
                return Ok(vec![verts]);
            }
            Ok(polygon_fan(&verts))
        }
        3 => {
            let rings = facet
                .rings
                .as_ref()
                .ok_or(crate::geometry::GeometryError::MissingRingData)?;
            let centroid = centroid_of(&verts);
            let mut simplices = Vec::new();
            for ring in rings {
                let cycle: Vec<Vec<f64>> = ring.iter().map(|&i| verts[i].clone()).collect();
                let triangles = if cycle.len() == 3 {
                    vec![cycle]
                } else {
                    polygon_fan(&cycle)
                };
                for mut tri in triangles {
                    tri.push(centroid.clone());
                    simplices.push(tri);
                }
            }
            Ok(simplices)
        }
        _ => Err(QuadratureError::Geometry(
            crate::geometry::GeometryError::BudgetExceeded(format!(
                "facet triangulation supports intrinsic dimension 1..3, got {}",
                n - 1
            )),
        )),
    }
}

fn centroid_of(verts: &[Vec<f64>]) -> Vec<f64> {
    let n = verts[0].len();
    (0..n)
        .map(|c| verts.iter().map(|v| v[c]).sum::<f64>() / verts.len() as f64)
        .collect()
}

/// Fan triangulation of a planar convex polygon around its centroid, with an
/// angular sort in the polygon plane first (robust to unordered input).
fn polygon_fan(verts: &[Vec<f64>]) -> Vec<Vec<Vec<f64>>> {
    let centroid = centroid_of(verts);
    let diffs: Vec<Vec<f64>> = verts.iter().map(|v| linalg::sub(v, &centroid)).collect();
    let basis = linalg::orthonormalize(&diffs, 1e-12);
    let (b0, b1) = (&basis[0], &basis[1]);
    let mut keyed: Vec<(f64, usize)> = diffs
        .iter()
        .enumerate()
        .map(|(i, d)| (linalg::dot(d, b1).atan2(linalg::dot(d, b0)), i))
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

/// (n−1)-volume of a facet from its triangulation.
pub fn facet_area(facet: &Facet) -> Result<f64, QuadratureError> {
    Ok(triangulate_facet(facet)?
        .iter()
        .map(|s| simplex_volume(s))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ConvexBody, SymVPolytope};
    use crate::linalg::Vector;

    #[test]
    fn constant_over_reference_triangle() {
        let tri = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let r = simplex_integrate(|_| 1.0, &tri, 3).unwrap();
        assert!((r.value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn linear_over_unit_segment() {
        let seg = vec![vec![0.0], vec![1.0]];
        let r = simplex_integrate(|x| x[0], &seg, 3).unwrap();
        assert!((r.value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn norm_over_offset_segment() {
        // ∫₀¹ √(1+t²) dt = (√2 + asinh 1)/2.
        let seg = vec![vec![1.0, 0.0], vec![1.0, 1.0]];
        let r = simplex_integrate(linalg::norm, &seg, 15).unwrap();
        let expect = (2.0f64.sqrt() + 1.0f64.asinh()) / 2.0;
        assert!(
            (r.value - expect).abs() < 1e-10,
            "value {} expect {}",
            r.value,
            expect
        );
        assert!((r.value - 1.147793).abs() < 1e-6);
    }

    #[test]
    fn monomial_exactness_on_unit_simplex() {
        // ∫_{T_d} Π xᵢ^{aᵢ} dx = Π aᵢ! / (|a| + d)!.
        let tri = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        for (a, b) in [(1usize, 0usize), (2, 1), (3, 2), (4, 4), (5, 3)] {
            let exact = factorial(a) * factorial(b) / factorial(a + b + 2);
            let deg = a + b;
            let r = simplex_integrate(
                |x| x[0].powi(a as i32) * x[1].powi(b as i32),
                &tri,
                deg.max(1),
            )
            .unwrap();
            assert!(
                (r.value - exact).abs() <= 1e-13 * exact.max(1.0),
                "monomial x^{a} y^{b}: got {}, want {exact}",
                r.value
            );
        }
        // Tetrahedron, mixed monomial.
        let tet = vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        let exact = factorial(2) * factorial(1) * factorial(1) / factorial(2 + 1 + 1 + 3);
        let r = simplex_integrate(|x| x[0] * x[0] * x[1] * x[2], &tet, 4).unwrap();
        assert!((r.value - exact).abs() <= 1e-14);
    }

    #[test]
    fn degenerate_simplex_rejected() {
        let seg = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        assert!(matches!(
            simplex_integrate(|_| 1.0, &seg, 3),
            Err(QuadratureError::DegenerateSimplex)
        ));
    }

    #[test]
    fn bad_degree_rejected() {
        let seg = vec![vec![0.0], vec![1.0]];
        assert!(matches!(
            simplex_integrate(|_| 1.0, &seg, 0),
            Err(QuadratureError::BadDegree(0))
        ));
        assert!(matches!(
            simplex_integrate(|_| 1.0, &seg, 26),
            Err(QuadratureError::BadDegree(26))
        ));
    }

    #[test]
    fn triangulation_preserves_area() {
        let cube = ConvexBody::axis_box(vec![1.0, 1.0, 1.0]).unwrap();
        let p = cube.to_facet_form().unwrap();
        for f in p.facets() {
            let simplices = triangulate_facet(f).unwrap();
            assert_eq!(simplices.len(), 4);
            let area: f64 = simplices.iter().map(|s| simplex_volume(s)).sum();
            assert!((area - 4.0).abs() < 1e-10);
        }
    }

    #[test]
    fn triangulation_of_triangle_facet_is_identity() {
        let p = crate::geometry::cross_polytope(3).build_facets().unwrap();
        for f in p.facets() {
            let simplices = triangulate_facet(f).unwrap();
            assert_eq!(simplices.len(), 1);
        }
    }

    #[test]
    fn triangulation_in_dimension_four() {
        let gens: Vec<Vector> = (0..8)
            .map(|mask: usize| {
                let mut v = vec![1.0];
                for bit in 0..3 {
                    v.push(if (mask >> bit) & 1 == 1 { -1.0 } else { 1.0 });
                }
                Vector::from_slice(&v).unwrap()
            })
            .collect();
        let cube4 = SymVPolytope::new(gens).unwrap();
        let p = cube4.build_facets().unwrap();
        // Each facet of the 4-cube is a 3-cube of 3-volume 8.
        for f in p.facets() {
            let vol: f64 = triangulate_facet(f)
                .unwrap()
                .iter()
                .map(|s| simplex_volume(s))
                .sum();
            assert!((vol - 8.0).abs() < 1e-10, "facet volume {vol}");
        }
    }

    #[test]
    fn segment_facet_passthrough() {
        let square = SymVPolytope::new(vec![
            Vector::from_slice(&[1.0, 1.0]).unwrap(),
            Vector::from_slice(&[1.0, -1.0]).unwrap(),
        ])
        .unwrap();
        let p = square.build_facets().unwrap();
        for f in p.facets() {
            assert_eq!(triangulate_facet(f).unwrap().len(), 1);
        }
    }
}
