//! Vertex-represented bodies: the general convex hull of a finite point set
//! (possibly lower-dimensional, possibly not containing the origin) and the
//! origin-symmetric specialization conv(V ∪ −V).

use crate::linalg::{self, Vector};

use super::{facets, FacetListedPolytope, GeometryError, Subspace};

/// Isometric coordinates for the affine hull of a lower-dimensional body.
///
/// Points decompose as x = offset + Σ yᵢ·dirs[i] with `offset ⊥ span(dirs)`,
/// so |x|² = |offset|² + |y|² and moment integrands keep their ambient norm.
#[derive(Debug, Clone)]
pub struct Chart {
    pub offset: Vec<f64>,
    pub dirs: Vec<Vec<f64>>,
}

impl Chart {
    pub fn dim(&self) -> usize {
        self.dirs.len()
    }

    pub fn offset_norm(&self) -> f64 {
        linalg::norm(&self.offset)
    }

    pub fn to_local(&self, x: &[f64]) -> Vec<f64> {
        self.dirs.iter().map(|d| linalg::dot(d, x)).collect()
    }

    pub fn to_ambient(&self, y: &[f64]) -> Vec<f64> {
        let mut out = self.offset.clone();
        for (d, &c) in self.dirs.iter().zip(y) {
            for (o, di) in out.iter_mut().zip(d) {
                *o += c * di;
            }
        }
        out
    }
}

/// Convex hull of a finite point set in ℝⁿ.
#[derive(Debug, Clone)]
pub struct Hull {
    points: Vec<Vector>,
}

impl Hull {
    pub fn new(points: Vec<Vector>) -> Result<Self, GeometryError> {
        if points.is_empty() {
            return Err(GeometryError::Degenerate("empty point set".into()));
        }
        let n = points[0].dim();
        if points.iter().any(|p| p.dim() != n) {
            return Err(GeometryError::DimensionMismatch {
                expected: n,
                got: points.iter().map(|p| p.dim()).find(|&d| d != n).unwrap(),
            });
        }
        Ok(Hull { points })
    }

    pub fn from_coords(points: Vec<Vec<f64>>) -> Result<Self, GeometryError> {
        Hull::new(
            points
                .into_iter()
                .map(Vector::new)
                .collect::<Result<_, _>>()?,
        )
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn ambient_dim(&self) -> usize {
        self.points[0].dim()
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        let diffs: Vec<Vec<f64>> = self.points[1..]
            .iter()
            .map(|p| linalg::sub(p, &self.points[0]))
            .collect();
        linalg::rank(&diffs, 1e-10)
    }

    pub fn translate(&self, v: &[f64]) -> Hull {
        Hull {
            points: self
                .points
                .iter()
                .map(|p| Vector::from_unchecked(linalg::add(p, v)))
                .collect(),
        }
    }

    pub fn reflect(&self) -> Hull {
        Hull {
            points: self
                .points
                .iter()
                .map(|p| Vector::from_unchecked(linalg::scale(p, -1.0)))
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Hull {
        Hull {
            points: self
                .points
                .iter()
                .map(|p| Vector::from_unchecked(linalg::scale(p, s)))
                .collect(),
        }
    }

    /// Chart of the affine hull plus the points in chart coordinates.
    pub fn chart(&self) -> (Chart, Vec<Vec<f64>>) {
        let base = &self.points[0];
        let diffs: Vec<Vec<f64>> = self.points[1..]
            .iter()
            .map(|p| linalg::sub(p, base))
            .collect();
        let dirs = linalg::orthonormalize(&diffs, 1e-10);
        let mut offset: Vec<f64> = base.to_vec();
        for d in &dirs {
            let c = linalg::dot(&offset, d);
            for (o, di) in offset.iter_mut().zip(d) {
                *o -= c * di;
            }
        }
        // Snap tiny offsets to zero to keep the through-origin case exact.
        let scale_ref = self
            .points
            .iter()
            .map(|p| linalg::norm(p))
            .fold(0.0f64, f64::max)
            .max(1.0);
        if linalg::norm(&offset) <= 1e-12 * scale_ref {
            offset = vec![0.0; base.dim()];
        }
        let chart = Chart { offset, dirs };
        let local = self.points.iter().map(|p| chart.to_local(p)).collect();
        (chart, local)
    }

    /// Membership test via chart reduction and brute-force facets.
    pub fn contains(&self, x: &[f64], tol: f64) -> Result<bool, GeometryError> {
        let (chart, local) = self.chart();
        let scale_ref = self
            .points
            .iter()
            .map(|p| linalg::norm(p))
            .fold(0.0f64, f64::max)
            .max(1.0);
        let recon = chart.to_ambient(&chart.to_local(x));
        if linalg::dist(&recon, x) > (tol + 1e-9) * scale_ref {
            return Ok(false);
        }
        let y = chart.to_local(x);
        match chart.dim() {
            0 => Ok(true),
            1 => {
                let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
                for p in &local {
                    lo = lo.min(p[0]);
                    hi = hi.max(p[0]);
                }
                let slack = (tol + 1e-12) * scale_ref;
                Ok(y[0] >= lo - slack && y[0] <= hi + slack)
            }
            2 => {
                let cycle = linalg::hull_2d(&local);
                if cycle.len() < 3 {
                    return Err(GeometryError::Degenerate("flat chart polygon".into()));
                }
                let slack = (tol + 1e-12) * scale_ref;
                let m = cycle.len();
                Ok((0..m).all(|i| {
                    let a = &cycle[i];
                    let b = &cycle[(i + 1) % m];
                    (b[0] - a[0]) * (y[1] - a[1]) - (b[1] - a[1]) * (y[0] - a[0]) >= -slack
                }))
            }
            _ => {
                let fs = facets::facets_from_points(&local, chart.dim())?;
                let slack = (tol + 1e-12) * scale_ref;
                Ok(fs
                    .iter()
                    .all(|f| linalg::dot(&f.normal, &y) <= f.offset + slack))
            }
        }
    }
}

/// Minkowski combination (1−λ)A + λB of two hulls, exact over vertex lists.
pub fn minkowski_combination(a: &Hull, b: &Hull, lambda: f64) -> Result<Hull, GeometryError> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(GeometryError::DimensionMismatch {
            expected: a.ambient_dim(),
            got: b.ambient_dim(),
        });
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(GeometryError::InvalidParameter(
            "λ must lie in [0,1]".into(),
        ));
    }
    if lambda == 0.0 {
        return Ok(a.clone());
    }
    if lambda == 1.0 {
        return Ok(b.clone());
    }
    let mut points = Vec::with_capacity(a.points.len() * b.points.len());
    for pa in &a.points {
        for pb in &b.points {
            points.push(Vector::from_unchecked(linalg::lin_comb(
                1.0 - lambda,
                pa,
                lambda,
                pb,
            )));
        }
    }
    Hull::new(points)
}

/// Origin-symmetric V-polytope conv(V ∪ −V) given by the generator half V.
#[derive(Debug, Clone)]
pub struct SymVPolytope {
    generators: Vec<Vector>,
    intrinsic_dim: usize,
}

impl SymVPolytope {
    pub fn new(generators: Vec<Vector>) -> Result<Self, GeometryError> {
        if generators.is_empty() {
            return Err(GeometryError::Degenerate("empty vertex list".into()));
        }
        let n = generators[0].dim();
        if generators.iter().any(|g| g.dim() != n) {
            return Err(GeometryError::DimensionMismatch {
                expected: n,
                got: generators
                    .iter()
                    .map(|g| g.dim())
                    .find(|&d| d != n)
                    .unwrap(),
            });
        }
        // The affine hull of conv(±V) is the linear span of V.
        let raw: Vec<Vec<f64>> = generators.iter().map(|g| g.to_vec()).collect();
        let intrinsic_dim = linalg::rank(&raw, 1e-10);
        if intrinsic_dim == 0 {
            return Err(GeometryError::Degenerate("all generators are zero".into()));
        }
        Ok(SymVPolytope {
            generators,
            intrinsic_dim,
        })
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    pub fn ambient_dim(&self) -> usize {
        self.generators[0].dim()
    }

    pub fn intrinsic_dim(&self) -> usize {
        self.intrinsic_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.intrinsic_dim == self.ambient_dim()
    }

    /// Full vertex candidate list V ∪ −V with near-duplicates removed.
    pub fn full_vertices(&self) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = Vec::with_capacity(2 * self.generators.len());
        let scale_ref = self
            .generators
            .iter()
            .map(|g| linalg::norm(g))
            .fold(0.0f64, f64::max)
            .max(1.0);
        for g in &self.generators {
            for cand in [g.to_vec(), linalg::scale(g, -1.0)] {
                if !out
                    .iter()
                    .any(|p| linalg::dist(p, &cand) <= 1e-9 * scale_ref)
                {
                    out.push(cand);
                }
            }
        }
        out
    }

    pub fn to_hull(&self) -> Hull {
        Hull {
            points: self
                .full_vertices()
                .into_iter()
                .map(Vector::from_unchecked)
                .collect(),
        }
    }

    pub fn support(&self, x: &[f64]) -> f64 {
        self.generators
            .iter()
            .map(|g| linalg::dot(g, x).abs())
            .fold(0.0, f64::max)
    }

    pub fn reflect(&self) -> SymVPolytope {
        self.clone()
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> Result<bool, GeometryError> {
        self.to_hull().contains(x, tol)
    }

    /// Projection onto L, exact over generators, in L-coordinates.
    pub fn project(&self, l: &Subspace) -> Result<SymVPolytope, GeometryError> {
        if l.ambient_dim() != self.ambient_dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.ambient_dim(),
                got: l.ambient_dim(),
            });
        }
        let gens: Vec<Vector> = self
            .generators
            .iter()
            .map(|g| Vector::from_unchecked(l.local_coordinates(g)))
            .collect();
        SymVPolytope::new(gens)
    }

    /// Brute-force facet detection; requires a full-dimensional body within
    /// the desk-scale budget (n ≤ 4, ≤ 80 vertices).
    pub fn build_facets(&self) -> Result<FacetListedPolytope, GeometryError> {
        facets::build_facets(self)
    }

    pub fn scale(&self, s: f64) -> SymVPolytope {
        SymVPolytope {
            generators: self
                .generators
                .iter()
                .map(|g| Vector::from_unchecked(linalg::scale(g, s)))
                .collect(),
            intrinsic_dim: self.intrinsic_dim,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(coords: &[f64]) -> Vector {
        Vector::from_slice(coords).unwrap()
    }

    #[test]
    fn minkowski_segment_example() {
        // A = [1,2]·e1, B = [−2,−1]·e1, λ = 2/3 → [−1, 0]·e1.
        let a = Hull::new(vec![v(&[1.0]), v(&[2.0])]).unwrap();
        let b = Hull::new(vec![v(&[-2.0]), v(&[-1.0])]).unwrap();
        let c = minkowski_combination(&a, &b, 2.0 / 3.0).unwrap();
        let xs: Vec<f64> = c.points().iter().map(|p| p[0]).collect();
        let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!((lo + 1.0).abs() < 1e-12 && hi.abs() < 1e-12);
    }

    #[test]
    fn minkowski_lambda_zero_is_identity() {
        let a = Hull::new(vec![v(&[1.0, 0.0]), v(&[0.0, 1.0])]).unwrap();
        let b = Hull::new(vec![v(&[5.0, 5.0])]).unwrap();
        let c = minkowski_combination(&a, &b, 0.0).unwrap();
        assert_eq!(c.points().len(), 2);
    }

    #[test]
    fn minkowski_self_midpoint_of_symmetric_contains_origin() {
        let a = SymVPolytope::new(vec![v(&[1.0, 0.4]), v(&[-0.3, 1.0])])
            .unwrap()
            .to_hull();
        let c = minkowski_combination(&a, &a.reflect(), 0.5).unwrap();
        assert!(c.contains(&[0.0, 0.0], 1e-9).unwrap());
    }

    #[test]
    fn chart_norm_identity() {
        // Triangle in the plane z = 2.
        let h = Hull::new(vec![
            v(&[1.0, 0.0, 2.0]),
            v(&[0.0, 1.0, 2.0]),
            v(&[0.0, 0.0, 2.0]),
        ])
        .unwrap();
        let (chart, local) = h.chart();
        assert_eq!(chart.dim(), 2);
        assert!((chart.offset_norm() - 2.0).abs() < 1e-12);
        for (p, y) in h.points().iter().zip(&local) {
            let back = chart.to_ambient(y);
            assert!(linalg::dist(&back, p) < 1e-12);
            let n2 = chart.offset_norm().powi(2) + linalg::norm_sq(y);
            assert!((n2 - linalg::norm_sq(p)).abs() < 1e-10);
        }
    }

    #[test]
    fn intrinsic_dim_of_planar_body_in_space() {
        let p = SymVPolytope::new(vec![v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0])]).unwrap();
        assert_eq!(p.intrinsic_dim(), 2);
        assert!(!p.is_full_dimensional());
    }
}
