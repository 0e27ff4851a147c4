//! Facet-listed polytopes and brute-force facet detection.
//!
//! Facet detection enumerates point subsets and keeps every supporting
//! hyperplane; hard budgets (ambient dimension ≤ 4, ≤ 80 vertices) keep the
//! search desk-scale. Facets of 3-dimensional bodies carry ordered vertex
//! cycles; facets of 4-dimensional bodies carry the ordered cycles of their
//! ridge polygons (`rings`), which the simplex triangulation consumes.

use std::collections::HashSet;

use crate::linalg::{self, Vector};

use super::{GeometryError, NormalSelection, SymVPolytope};

/// Relative facet-activity tolerance (against the facet offset).
pub const FACET_ACTIVITY_TOL: f64 = 1e-9;

/// Relative tolerance for deciding that a facet normal lies in a subspace.
pub const SUBSPACE_MEMBERSHIP_TOL: f64 = 1e-9;

/// A supporting hyperplane section of a general point hull. The offset is
/// signed: `⟨normal, x⟩ ≤ offset` for all hull points, normal outward.
#[derive(Debug, Clone)]
pub struct GeneralFacet {
    pub normal: Vec<f64>,
    pub offset: f64,
    pub vertex_ids: Vec<usize>,
    pub vertices: Vec<Vec<f64>>,
}

/// A facet of an origin-symmetric full-dimensional polytope: unit outward
/// normal, positive offset, vertex list (cycle-ordered for 2-dimensional
/// facets) and, for 3-dimensional facets, the ordered ridge cycles.
#[derive(Debug, Clone)]
pub struct Facet {
    pub normal: Vector,
    pub offset: f64,
    pub vertices: Vec<Vector>,
    pub rings: Option<Vec<Vec<usize>>>,
}

/// Canonical form for exact facet integration.
#[derive(Debug, Clone)]
pub struct FacetListedPolytope {
    dim: usize,
    facets: Vec<Facet>,
    symmetric: bool,
}

fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // Advance the lexicographically next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in (i + 1)..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Orders coplanar points into a convex cycle (angular sort about the
/// centroid in a 2D chart of their plane). Returns the reordered ids.
fn order_cycle(points: &[Vec<f64>], ids: &[usize]) -> Vec<usize> {
    let pts: Vec<Vec<f64>> = ids.iter().map(|&i| points[i].clone()).collect();
    let diffs: Vec<Vec<f64>> = pts[1..].iter().map(|p| linalg::sub(p, &pts[0])).collect();
    let basis = linalg::orthonormalize(&diffs, 1e-10);
    debug_assert!(basis.len() == 2);
    let centroid: Vec<f64> = (0..pts[0].len())
        .map(|c| pts.iter().map(|p| p[c]).sum::<f64>() / pts.len() as f64)
        .collect();
    let mut keyed: Vec<(f64, usize)> = ids
        .iter()
        .map(|&i| {
            let d = linalg::sub(&points[i], &centroid);
            let u = linalg::dot(&d, &basis[0]);
            let v = linalg::dot(&d, &basis[1]);
            (v.atan2(u), i)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
    keyed.into_iter().map(|(_, i)| i).collect()
}

/// Brute-force supporting-hyperplane detection over a full-dimensional point
/// set in ℝ^dim. Each facet collects every point on its hyperplane.
pub fn facets_from_points(
    points: &[Vec<f64>],
    dim: usize,
) -> Result<Vec<GeneralFacet>, GeometryError> {
    if dim > 4 {
        return Err(GeometryError::BudgetExceeded(format!(
            "facet detection supports ambient dimension ≤ 4, got {dim}"
        )));
    }
    if points.len() > 80 {
        return Err(GeometryError::BudgetExceeded(format!(
            "facet detection supports ≤ 80 vertices, got {}",
            points.len()
        )));
    }
    if points.len() < dim + 1 {
        return Err(GeometryError::Degenerate(
            "too few points for a full-dimensional hull".into(),
        ));
    }
    let scale_ref = points
        .iter()
        .map(|p| linalg::norm(p))
        .fold(0.0f64, f64::max)
        .max(1e-12);
    let tol = 1e-9 * scale_ref;

    let mut facets: Vec<GeneralFacet> = Vec::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    for_each_combination(points.len(), dim, |subset| {
        let base = &points[subset[0]];
        let dirs: Vec<Vec<f64>> = subset[1..]
            .iter()
            .map(|&i| linalg::sub(&points[i], base))
            .collect();
        let Some(mut normal) = linalg::hyperplane_normal(&dirs, dim) else {
            return;
        };
        let mut h = linalg::dot(&normal, base);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for p in points {
            let s = linalg::dot(&normal, p);
            lo = lo.min(s);
            hi = hi.max(s);
        }
        if hi <= h + tol {
            // outward already
        } else if lo >= h - tol {
            normal = linalg::scale(&normal, -1.0);
            h = -h;
        } else {
            return;
        }
        let mut ids: Vec<usize> = (0..points.len())
            .filter(|&i| (linalg::dot(&normal, &points[i]) - h).abs() <= tol)
            .collect();
        ids.sort_unstable();
        if !seen.insert(ids.clone()) {
            return;
        }
        facets.push(GeneralFacet {
            normal,
            offset: h,
            vertices: ids.iter().map(|&i| points[i].clone()).collect(),
            vertex_ids: ids,
        });
    });
    if facets.len() < dim + 1 {
        return Err(GeometryError::Degenerate(
            "hull is not full-dimensional".into(),
        ));
    }
    Ok(facets)
}

/// Brute-force facet construction for a full-dimensional symmetric
/// V-polytope, with outward unit normals, positive offsets, cycle-ordered
/// polygon facets and ring data in dimension 4.
pub fn build_facets(poly: &SymVPolytope) -> Result<FacetListedPolytope, GeometryError> {
    let n = poly.ambient_dim();
    if !poly.is_full_dimensional() {
        return Err(GeometryError::Degenerate(
            "facet construction requires a full-dimensional body".into(),
        ));
    }
    let points = poly.full_vertices();
    let mut general = facets_from_points(&points, n)?;

    let scale_ref = points
        .iter()
        .map(|p| linalg::norm(p))
        .fold(0.0f64, f64::max)
        .max(1e-12);

    // A vertex of an n-polytope lies in at least n facets; input points with
    // smaller incidence are interior to the hull, a facet or a ridge and are
    // dropped from the facet descriptions.
    let mut incidence = vec![0usize; points.len()];
    for f in &general {
        for &i in &f.vertex_ids {
            incidence[i] += 1;
        }
    }
    for f in general.iter_mut() {
        f.vertex_ids.retain(|&i| incidence[i] >= n);
        f.vertices = f.vertex_ids.iter().map(|&i| points[i].clone()).collect();
        if f.vertex_ids.len() < n {
            return Err(GeometryError::Degenerate(
                "facet with too few extreme points".into(),
            ));
        }
    }

    let mut facets = Vec::with_capacity(general.len());
    for gf in &general {
        if gf.offset <= 1e-9 * scale_ref {
            // A symmetric full-dimensional body cannot have a facet plane
            // through the origin.
            return Err(GeometryError::OriginNotInterior);
        }
        if gf.vertex_ids.len() < n {
            return Err(GeometryError::Degenerate(
                "facet with too few vertices".into(),
            ));
        }
        let ordered_ids: Vec<usize> = if n == 3 {
            order_cycle(&points, &gf.vertex_ids)
        } else {
            gf.vertex_ids.clone()
        };
        let rings = if n == 4 {
            Some(facet_rings(&points, gf, &general)?)
        } else {
            None
        };
        facets.push(Facet {
            normal: Vector::from_unchecked(gf.normal.clone()),
            offset: gf.offset,
            vertices: ordered_ids
                .iter()
                .map(|&i| Vector::from_unchecked(points[i].clone()))
                .collect(),
            rings: rings.map(|rs| {
                rs.into_iter()
                    .map(|ring| {
                        ring.iter()
                            .map(|rid| ordered_ids.iter().position(|&v| v == *rid).unwrap())
                            .collect()
                    })
                    .collect()
            }),
        });
    }

    if n == 3 {
        // V − E + F = 2; each edge is shared by exactly two facet cycles.
        let v = incidence.iter().filter(|&&c| c >= n).count() as i64;
        let e: i64 = facets.iter().map(|f| f.vertices.len() as i64).sum::<i64>() / 2;
        let f = facets.len() as i64;
        if v - e + f != 2 {
            return Err(GeometryError::Degenerate(format!(
                "Euler check failed: V−E+F = {}",
                v - e + f
            )));
        }
    }

    Ok(FacetListedPolytope {
        dim: n,
        facets,
        symmetric: true,
    })
}

/// Ridge cycles of a 3-dimensional facet of a 4-polytope: the ordered
/// boundary polygons shared with adjacent facets (global point ids).
fn facet_rings(
    points: &[Vec<f64>],
    facet: &GeneralFacet,
    all: &[GeneralFacet],
) -> Result<Vec<Vec<usize>>, GeometryError> {
    let own: HashSet<usize> = facet.vertex_ids.iter().copied().collect();
    let mut rings = Vec::new();
    for other in all {
        if other.vertex_ids == facet.vertex_ids {
            continue;
        }
        let shared: Vec<usize> = other
            .vertex_ids
            .iter()
            .copied()
            .filter(|i| own.contains(i))
            .collect();
        if shared.len() < 3 {
            continue;
        }
        let diffs: Vec<Vec<f64>> = shared[1..]
            .iter()
            .map(|&i| linalg::sub(&points[i], &points[shared[0]]))
            .collect();
        if linalg::rank(&diffs, 1e-10) != 2 {
            continue;
        }
        rings.push(order_cycle(points, &shared));
    }
    if rings.len() < 4 {
        return Err(GeometryError::Degenerate(
            "3-dimensional facet with fewer than 4 ridge polygons".into(),
        ));
    }
    Ok(rings)
}

impl FacetListedPolytope {
    /// Assembles a polytope from prebuilt facets, checking the invariants the
    /// engines rely on: unit normals, positive offsets, and every facet
    /// vertex lying on its hyperplane.
    pub fn new(dim: usize, facets: Vec<Facet>, symmetric: bool) -> Result<Self, GeometryError> {
        if facets.len() < dim + 1 {
            return Err(GeometryError::Degenerate("too few facets".into()));
        }
        for f in &facets {
            if f.normal.dim() != dim {
                return Err(GeometryError::DimensionMismatch {
                    expected: dim,
                    got: f.normal.dim(),
                });
            }
            if (linalg::norm(&f.normal) - 1.0).abs() > 1e-12 {
                return Err(GeometryError::NotUnit);
            }
            if !(f.offset > 0.0) {
                return Err(GeometryError::NonPositiveOffset);
            }
            for v in &f.vertices {
                if (linalg::dot(&f.normal, v) - f.offset).abs() > 1e-7 * f.offset.max(1.0) {
                    return Err(GeometryError::Degenerate(
                        "facet vertex off its hyperplane".into(),
                    ));
                }
            }
        }
        Ok(FacetListedPolytope {
            dim,
            facets,
            symmetric,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn facet(&self, i: usize) -> Result<&Facet, GeometryError> {
        self.facets.get(i).ok_or(GeometryError::InvalidFacetIndex {
            index: i,
            count: self.facets.len(),
        })
    }

    /// Deduplicated union of all facet vertices.
    pub fn vertex_set(&self) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = Vec::new();
        let scale_ref = self
            .facets
            .iter()
            .flat_map(|f| f.vertices.iter())
            .map(|v| linalg::norm(v))
            .fold(0.0f64, f64::max)
            .max(1.0);
        for f in &self.facets {
            for v in &f.vertices {
                if !out.iter().any(|p| linalg::dist(p, v) <= 1e-9 * scale_ref) {
                    out.push(v.to_vec());
                }
            }
        }
        out
    }

    pub fn support(&self, x: &[f64]) -> f64 {
        self.facets
            .iter()
            .flat_map(|f| f.vertices.iter())
            .map(|v| linalg::dot(v, x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn radial(&self, x: &[f64]) -> Result<f64, GeometryError> {
        if linalg::norm(x) == 0.0 {
            return Err(GeometryError::ZeroDirection);
        }
        let mut rho = f64::INFINITY;
        for f in &self.facets {
            let d = linalg::dot(&f.normal, x);
            if d > 0.0 {
                rho = rho.min(f.offset / d);
            }
        }
        if !rho.is_finite() {
            return Err(GeometryError::Unbounded);
        }
        Ok(rho)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.facets
            .iter()
            .all(|f| linalg::dot(&f.normal, x) <= f.offset * (1.0 + tol))
    }

    /// Indices of facets active at the boundary point in direction `u`
    /// (relative tolerance against each offset).
    pub fn active_facets(&self, u: &[f64], tol: f64) -> Result<Vec<usize>, GeometryError> {
        let rho = self.radial(u)?;
        let y = linalg::scale(u, rho);
        Ok(self
            .facets
            .iter()
            .enumerate()
            .filter(|(_, f)| linalg::dot(&f.normal, &y) >= f.offset * (1.0 - tol))
            .map(|(i, _)| i)
            .collect())
    }

    /// Facet indices whose normals lie in L (within the membership tolerance).
    pub fn facets_in_subspace(&self, l: &super::Subspace) -> Vec<usize> {
        self.facets
            .iter()
            .enumerate()
            .filter(|(_, f)| l.residual(&f.normal) <= SUBSPACE_MEMBERSHIP_TOL)
            .map(|(i, _)| i)
            .collect()
    }

    /// Membership of `u` in the reverse radial Gauss image α*(η): does the
    /// boundary point ρ(u)·u lie in a supporting hyperplane H(v) with v ∈ η?
    pub fn reverse_radial_gauss_contains(
        &self,
        eta: &NormalSelection,
        u: &[f64],
        tol: f64,
    ) -> Result<bool, GeometryError> {
        let active = self.active_facets(u, tol)?;
        Ok(match eta {
            NormalSelection::FullSphere => !active.is_empty(),
            NormalSelection::FacetSubset(ids) => active.iter().any(|i| ids.contains(i)),
            NormalSelection::SubspaceCap(l) => active
                .iter()
                .any(|&i| l.residual(&self.facets[i].normal) <= SUBSPACE_MEMBERSHIP_TOL),
        })
    }

    /// The dilate λP: vertices and offsets scale, normals are unchanged.
    pub fn scaled(&self, lambda: f64) -> FacetListedPolytope {
        FacetListedPolytope {
            dim: self.dim,
            symmetric: self.symmetric,
            facets: self
                .facets
                .iter()
                .map(|f| Facet {
                    normal: f.normal.clone(),
                    offset: f.offset * lambda,
                    vertices: f
                        .vertices
                        .iter()
                        .map(|v| Vector::from_unchecked(linalg::scale(v, lambda)))
                        .collect(),
                    rings: f.rings.clone(),
                })
                .collect(),
        }
    }

    /// Image under an orthogonal map given by rows `r` (x ↦ Rx).
    pub fn rotated(&self, r: &[Vec<f64>]) -> FacetListedPolytope {
        let apply = |x: &[f64]| -> Vec<f64> { r.iter().map(|row| linalg::dot(row, x)).collect() };
        FacetListedPolytope {
            dim: self.dim,
            symmetric: self.symmetric,
            facets: self
                .facets
                .iter()
                .map(|f| Facet {
                    normal: Vector::from_unchecked(apply(&f.normal)),
                    offset: f.offset,
                    vertices: f
                        .vertices
                        .iter()
                        .map(|v| Vector::from_unchecked(apply(v)))
                        .collect(),
                    rings: f.rings.clone(),
                })
                .collect(),
        }
    }
}

/// Cross-polytope conv{±e₁, …, ±eₙ}.
pub fn cross_polytope(n: usize) -> SymVPolytope {
    let gens = (0..n)
        .map(|i| Vector::from_unchecked(linalg::basis_vector(n, i)))
        .collect();
    SymVPolytope::new(gens).expect("cross polytope generators are valid")
}

/// Parallelotope A·[−1,1]ⁿ for an invertible matrix (rows).
pub fn parallelotope(a: &[Vec<f64>]) -> Result<SymVPolytope, GeometryError> {
    let n = a.len();
    if n == 0 || a.iter().any(|row| row.len() != n) {
        return Err(GeometryError::InvalidParameter(
            "matrix must be square".into(),
        ));
    }
    if linalg::det(a).abs() <= 1e-12 {
        return Err(GeometryError::Degenerate(
            "singular parallelotope matrix".into(),
        ));
    }
    let mut gens = Vec::with_capacity(1 << (n - 1));
    for mask in 0..(1usize << (n - 1)) {
        let mut y = vec![1.0];
        for bit in 0..(n - 1) {
            y.push(if (mask >> bit) & 1 == 1 { -1.0 } else { 1.0 });
        }
        let x: Vec<f64> = a.iter().map(|row| linalg::dot(row, &y)).collect();
        gens.push(Vector::from_unchecked(x));
    }
    SymVPolytope::new(gens)
}

/// Prism conv(Q−v, Q+v) for a symmetric base Q given by its full vertex list
/// (all of them in a hyperplane not containing v).
pub fn prism(base_vertices: &[Vector], apex: &Vector) -> Result<SymVPolytope, GeometryError> {
    if base_vertices.is_empty() {
        return Err(GeometryError::Degenerate("empty prism base".into()));
    }
    let gens = base_vertices
        .iter()
        .map(|w| Vector::from_unchecked(linalg::add(w, apex)))
        .collect();
    SymVPolytope::new(gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::box_generators;

    #[test]
    fn cube_facets() {
        let cube = SymVPolytope::new(box_generators(&[1.0, 1.0, 1.0])).unwrap();
        let p = cube.build_facets().unwrap();
        assert_eq!(p.facets().len(), 6);
        for f in p.facets() {
            assert!((f.offset - 1.0).abs() < 1e-12);
            assert_eq!(f.vertices.len(), 4);
        }
        assert_eq!(p.vertex_set().len(), 8);
    }

    #[test]
    fn cross_polytope_facets() {
        let p = cross_polytope(3).build_facets().unwrap();
        assert_eq!(p.facets().len(), 8);
        let h = 1.0 / 3.0f64.sqrt();
        for f in p.facets() {
            assert!((f.offset - h).abs() < 1e-12);
            assert_eq!(f.vertices.len(), 3);
        }
    }

    #[test]
    fn prism_facets() {
        // Q = [−1,1]² × {0}, v = e₃ → the unit cube, 6 facets.
        let base = [
            Vector::from_slice(&[1.0, 1.0, 0.0]).unwrap(),
            Vector::from_slice(&[1.0, -1.0, 0.0]).unwrap(),
            Vector::from_slice(&[-1.0, 1.0, 0.0]).unwrap(),
            Vector::from_slice(&[-1.0, -1.0, 0.0]).unwrap(),
        ];
        let apex = Vector::from_slice(&[0.0, 0.0, 1.0]).unwrap();
        let p = prism(&base, &apex).unwrap().build_facets().unwrap();
        assert_eq!(p.facets().len(), 6);
    }

    #[test]
    fn rotated_square_vertex_enumeration_cycle() {
        let s = 1.0 / 2.0f64.sqrt();
        let square = SymVPolytope::new(vec![
            Vector::from_slice(&[s, s]).unwrap(),
            Vector::from_slice(&[s, -s]).unwrap(),
        ])
        .unwrap();
        let p = square.build_facets().unwrap();
        assert_eq!(p.facets().len(), 4);
    }

    #[test]
    fn four_dimensional_cube_rings() {
        let cube4 = SymVPolytope::new(box_generators(&[1.0; 4])).unwrap();
        let p = cube4.build_facets().unwrap();
        assert_eq!(p.facets().len(), 8);
        for f in p.facets() {
            assert_eq!(f.vertices.len(), 8);
            let rings = f.rings.as_ref().unwrap();
            assert_eq!(rings.len(), 6);
            for ring in rings {
                assert_eq!(ring.len(), 4);
            }
        }
    }

    #[test]
    fn degenerate_input_rejected() {
        let flat = SymVPolytope::new(vec![
            Vector::from_slice(&[1.0, 0.0, 0.0]).unwrap(),
            Vector::from_slice(&[0.0, 1.0, 0.0]).unwrap(),
        ])
        .unwrap();
        assert!(flat.build_facets().is_err());
    }

    #[test]
    fn active_facets_at_ridge() {
        let cube = SymVPolytope::new(box_generators(&[1.0, 1.0, 1.0])).unwrap();
        let p = cube.build_facets().unwrap();
        let s = 1.0 / 2.0f64.sqrt();
        let active = p.active_facets(&[s, s, 0.0], FACET_ACTIVITY_TOL).unwrap();
        assert_eq!(active.len(), 2);
    }

    #[test]
    fn reverse_gauss_image_cube_examples() {
        let cube = SymVPolytope::new(box_generators(&[1.0, 1.0, 1.0])).unwrap();
        let p = cube.build_facets().unwrap();
        let plus_e1 = p
            .facets()
            .iter()
            .position(|f| (f.normal[0] - 1.0).abs() < 1e-12)
            .unwrap();
        let eta = NormalSelection::FacetSubset(vec![plus_e1]);
        assert!(p
            .reverse_radial_gauss_contains(&eta, &[1.0, 0.0, 0.0], FACET_ACTIVITY_TOL)
            .unwrap());
        assert!(!p
            .reverse_radial_gauss_contains(&eta, &[0.0, 1.0, 0.0], FACET_ACTIVITY_TOL)
            .unwrap());
        let s = 1.0 / 2.0f64.sqrt();
        assert!(p
            .reverse_radial_gauss_contains(&eta, &[s, s, 0.0], FACET_ACTIVITY_TOL)
            .unwrap());
    }

    #[test]
    fn parallelotope_volume_scaling_structure() {
        let a = vec![
            vec![1.0, 0.5, 0.0],
            vec![0.0, 2.0, 0.3],
            vec![0.0, 0.0, 2.5],
        ];
        let p = parallelotope(&a).unwrap().build_facets().unwrap();
        assert_eq!(p.facets().len(), 6);
    }
}
