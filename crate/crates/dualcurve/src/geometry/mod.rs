//! Origin-symmetric convex bodies and their elementary maps: support and
//! radial functions, membership, reflection, orthogonal projection, Minkowski
//! combinations and the reverse radial Gauss image.
//!
//! All exact measure computations downstream run on [`FacetListedPolytope`];
//! every other representation converts through [`ConvexBody::to_facet_form`].

mod facets;
mod hpolytope;
mod hull;

pub use facets::{
    cross_polytope, facets_from_points, parallelotope, prism, Facet, FacetListedPolytope,
    GeneralFacet, FACET_ACTIVITY_TOL, SUBSPACE_MEMBERSHIP_TOL,
};
pub use hpolytope::SymHPolytope;
pub use hull::{minkowski_combination, Chart, Hull, SymVPolytope};

use thiserror::Error;

use crate::linalg::{self, Vector};

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("vector must have at least one coordinate")]
    EmptyVector,
    #[error("coordinates must be finite")]
    NonFiniteCoordinate,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("direction must be nonzero")]
    ZeroDirection,
    #[error("normal vectors must be unit length")]
    NotUnit,
    #[error("offsets must be strictly positive")]
    NonPositiveOffset,
    #[error("duplicate ±normal pair")]
    DuplicateNormal,
    #[error("polytope is unbounded: normals do not span the ambient space")]
    Unbounded,
    #[error("brute-force budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("unsupported representation: {0}")]
    UnsupportedRepresentation(String),
    #[error("origin is not interior to the body")]
    OriginNotInterior,
    #[error("facet index {index} out of range for {count} facets")]
    InvalidFacetIndex { index: usize, count: usize },
    #[error("subspace basis is not column-orthonormal")]
    NotOrthonormal,
    #[error("subspace dimension must satisfy 1 ≤ dim ≤ n−1")]
    BadSubspaceDim,
    #[error("3-dimensional facet lacks ordered ring data")]
    MissingRingData,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Euclidean ball of radius `r` in ℝⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub n: usize,
    pub r: f64,
}

impl Ball {
    pub fn new(n: usize, r: f64) -> Result<Self, GeometryError> {
        if n == 0 {
            return Err(GeometryError::InvalidParameter("n ≥ 1 required".into()));
        }
        if !(r > 0.0) || !r.is_finite() {
            return Err(GeometryError::InvalidParameter(
                "radius must be positive".into(),
            ));
        }
        Ok(Ball { n, r })
    }
}

/// The product body (l·B_k) × B_{n−k}; the first `k` coordinates form the
/// scaled block.
#[derive(Debug, Clone, PartialEq)]
pub struct Cylinder {
    pub n: usize,
    pub k: usize,
    pub l: f64,
}

impl Cylinder {
    pub fn new(n: usize, k: usize, l: f64) -> Result<Self, GeometryError> {
        if n < 2 || k == 0 || k >= n {
            return Err(GeometryError::InvalidParameter(
                "cylinder requires 1 ≤ k ≤ n−1".into(),
            ));
        }
        if !(l > 0.0) || !l.is_finite() {
            return Err(GeometryError::InvalidParameter(
                "scale l must be positive".into(),
            ));
        }
        Ok(Cylinder { n, k, l })
    }

    /// Splits `x` into the block norms (|x₁|, |x₂|).
    pub fn block_norms(&self, x: &[f64]) -> (f64, f64) {
        (linalg::norm(&x[..self.k]), linalg::norm(&x[self.k..]))
    }
}

/// A proper linear subspace of ℝⁿ given by a column-orthonormal basis.
#[derive(Debug, Clone)]
pub struct Subspace {
    basis: Vec<Vector>,
    ambient: usize,
}

impl Subspace {
    /// Validates orthonormality to 1e−10 and 1 ≤ dim ≤ n−1.
    pub fn new(basis: Vec<Vector>) -> Result<Self, GeometryError> {
        if basis.is_empty() {
            return Err(GeometryError::BadSubspaceDim);
        }
        let ambient = basis[0].dim();
        if basis.iter().any(|b| b.dim() != ambient) {
            return Err(GeometryError::DimensionMismatch {
                expected: ambient,
                got: basis
                    .iter()
                    .map(|b| b.dim())
                    .find(|&d| d != ambient)
                    .unwrap(),
            });
        }
        if basis.len() >= ambient {
            return Err(GeometryError::BadSubspaceDim);
        }
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                let expect = if i == j { 1.0 } else { 0.0 };
                if (linalg::dot(&basis[i], &basis[j]) - expect).abs() > 1e-10 {
                    return Err(GeometryError::NotOrthonormal);
                }
            }
        }
        Ok(Subspace { basis, ambient })
    }

    /// Orthonormalizes a spanning set first (Gram–Schmidt), then validates.
    pub fn from_spanning(vectors: &[Vector]) -> Result<Self, GeometryError> {
        let raw: Vec<Vec<f64>> = vectors.iter().map(|v| v.to_vec()).collect();
        let basis = linalg::orthonormalize(&raw, 1e-10);
        Subspace::new(basis.into_iter().map(Vector::from_unchecked).collect())
    }

    /// Span of the coordinate axes `axes` (0-based) in ℝⁿ.
    pub fn coordinate(n: usize, axes: &[usize]) -> Result<Self, GeometryError> {
        let mut basis = Vec::new();
        for &a in axes {
            if a >= n {
                return Err(GeometryError::InvalidParameter(format!(
                    "axis {a} out of range for n={n}"
                )));
            }
            basis.push(Vector::from_unchecked(linalg::basis_vector(n, a)));
        }
        Subspace::new(basis)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// Coordinates of the orthogonal projection of `x` in the basis of L.
    pub fn local_coordinates(&self, x: &[f64]) -> Vec<f64> {
        self.basis.iter().map(|b| linalg::dot(b, x)).collect()
    }

    /// Embeds L-coordinates back into ℝⁿ.
    pub fn embed(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.ambient];
        for (b, &c) in self.basis.iter().zip(y) {
            for (o, bi) in out.iter_mut().zip(b.iter()) {
                *o += c * bi;
            }
        }
        out
    }

    /// Distance from `x` to its orthogonal projection onto L.
    pub fn residual(&self, x: &[f64]) -> f64 {
        let proj = self.embed(&self.local_coordinates(x));
        linalg::dist(x, &proj)
    }

    /// Whether L equals the span of coordinates `0..k`.
    pub fn is_coordinate_block(&self, k: usize) -> bool {
        if self.dim() != k {
            return false;
        }
        let n = self.ambient;
        (0..k).all(|i| self.residual(&linalg::basis_vector(n, i)) <= 1e-9)
    }
}

/// Borel selections of unit normals actually used by the concentration
/// theorems: finite facet subsets, great subspheres S ∩ L, or everything.
#[derive(Debug, Clone)]
pub enum NormalSelection {
    FacetSubset(Vec<usize>),
    SubspaceCap(Subspace),
    FullSphere,
}

impl NormalSelection {
    pub fn describe(&self) -> String {
        match self {
            NormalSelection::FacetSubset(idx) => format!("facets {idx:?}"),
            NormalSelection::SubspaceCap(l) => format!("S ∩ L (dim {})", l.dim()),
            NormalSelection::FullSphere => "full sphere".to_string(),
        }
    }
}

/// Tagged union of the body representations the measure engines accept.
#[derive(Debug, Clone)]
pub enum ConvexBody {
    AxisBox { halfwidths: Vec<f64> },
    HPolytope(SymHPolytope),
    VPolytope(SymVPolytope),
    Facets(FacetListedPolytope),
    Ball(Ball),
    Cylinder(Cylinder),
}

impl ConvexBody {
    pub fn axis_box(halfwidths: Vec<f64>) -> Result<Self, GeometryError> {
        if halfwidths.is_empty() {
            return Err(GeometryError::EmptyVector);
        }
        if halfwidths.iter().any(|&h| !(h > 0.0) || !h.is_finite()) {
            return Err(GeometryError::NonPositiveOffset);
        }
        Ok(ConvexBody::AxisBox { halfwidths })
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::AxisBox { halfwidths } => halfwidths.len(),
            ConvexBody::HPolytope(p) => p.dim(),
            ConvexBody::VPolytope(p) => p.ambient_dim(),
            ConvexBody::Facets(p) => p.dim(),
            ConvexBody::Ball(b) => b.n,
            ConvexBody::Cylinder(c) => c.n,
        }
    }

    fn check_dim(&self, x: &[f64]) -> Result<(), GeometryError> {
        if x.len() != self.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Support function h_K(x) = max_{y∈K} ⟨x,y⟩.
    pub fn support(&self, x: &[f64]) -> Result<f64, GeometryError> {
        self.check_dim(x)?;
        Ok(match self {
            ConvexBody::AxisBox { halfwidths } => {
                halfwidths.iter().zip(x).map(|(h, xi)| h * xi.abs()).sum()
            }
            ConvexBody::Ball(b) => b.r * linalg::norm(x),
            ConvexBody::Cylinder(c) => {
                let (s, t) = c.block_norms(x);
                c.l * s + t
            }
            ConvexBody::VPolytope(p) => p.support(x),
            ConvexBody::Facets(p) => p.support(x),
            ConvexBody::HPolytope(p) => p.enumerate_vertices()?.support(x),
        })
    }

    /// Radial function ρ_K(x) = max{ρ > 0 : ρx ∈ K}; requires x ≠ 0 and the
    /// origin interior.
    pub fn radial(&self, x: &[f64]) -> Result<f64, GeometryError> {
        self.check_dim(x)?;
        let nx = linalg::norm(x);
        if nx == 0.0 {
            return Err(GeometryError::ZeroDirection);
        }
        Ok(match self {
            ConvexBody::AxisBox { halfwidths } => {
                let mut rho = f64::INFINITY;
                for (h, xi) in halfwidths.iter().zip(x) {
                    if xi.abs() > 0.0 {
                        rho = rho.min(h / xi.abs());
                    }
                }
                rho
            }
            ConvexBody::Ball(b) => b.r / nx,
            ConvexBody::Cylinder(c) => {
                let (s, t) = c.block_norms(x);
                let mut rho = f64::INFINITY;
                if s > 0.0 {
                    rho = rho.min(c.l / s);
                }
                if t > 0.0 {
                    rho = rho.min(1.0 / t);
                }
                rho
            }
            ConvexBody::HPolytope(p) => p.radial(x)?,
            ConvexBody::Facets(p) => p.radial(x)?,
            ConvexBody::VPolytope(p) => {
                // Repeated radial queries should canonicalize via
                // `to_facet_form` once; this path rebuilds facets per call.
                p.build_facets()?.radial(x)?
            }
        })
    }

    /// Membership with every constraint inflated by the relative `tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> Result<bool, GeometryError> {
        self.check_dim(x)?;
        Ok(match self {
            ConvexBody::AxisBox { halfwidths } => halfwidths
                .iter()
                .zip(x)
                .all(|(h, xi)| xi.abs() <= h * (1.0 + tol)),
            ConvexBody::Ball(b) => linalg::norm(x) <= b.r * (1.0 + tol),
            ConvexBody::Cylinder(c) => {
                let (s, t) = c.block_norms(x);
                s <= c.l * (1.0 + tol) && t <= 1.0 + tol
            }
            ConvexBody::HPolytope(p) => p.contains(x, tol),
            ConvexBody::Facets(p) => p.contains(x, tol),
            ConvexBody::VPolytope(p) => p.contains(x, tol)?,
        })
    }

    /// Reflection −K. All representations here are origin-symmetric, so the
    /// reflected body equals the input as a set.
    pub fn reflect(&self) -> ConvexBody {
        match self {
            ConvexBody::VPolytope(p) => ConvexBody::VPolytope(p.reflect()),
            other => other.clone(),
        }
    }

    /// Orthogonal projection K|L expressed in L-coordinates.
    pub fn project(&self, l: &Subspace) -> Result<ConvexBody, GeometryError> {
        if l.ambient_dim() != self.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim(),
                got: l.ambient_dim(),
            });
        }
        match self {
            ConvexBody::Ball(b) => Ok(ConvexBody::Ball(Ball::new(l.dim(), b.r)?)),
            ConvexBody::Cylinder(c) => {
                if l.is_coordinate_block(c.k) {
                    Ok(ConvexBody::Ball(Ball::new(c.k, c.l)?))
                } else {
                    let complement: Vec<usize> = (c.k..c.n).collect();
                    let comp = Subspace::coordinate(c.n, &complement)?;
                    let same =
                        l.dim() == c.n - c.k && comp.basis().iter().all(|b| l.residual(b) <= 1e-9);
                    if same {
                        Ok(ConvexBody::Ball(Ball::new(c.n - c.k, 1.0)?))
                    } else {
                        Err(GeometryError::UnsupportedRepresentation(
                            "cylinder projection is only available onto its axis blocks".into(),
                        ))
                    }
                }
            }
            ConvexBody::AxisBox { halfwidths } => {
                let corners = box_generators(halfwidths);
                let poly = SymVPolytope::new(corners)?;
                Ok(ConvexBody::VPolytope(poly.project(l)?))
            }
            ConvexBody::VPolytope(p) => Ok(ConvexBody::VPolytope(p.project(l)?)),
            ConvexBody::Facets(p) => {
                let poly = SymVPolytope::new(
                    p.vertex_set()
                        .into_iter()
                        .map(Vector::from_unchecked)
                        .collect(),
                )?;
                Ok(ConvexBody::VPolytope(poly.project(l)?))
            }
            ConvexBody::HPolytope(_) => Err(GeometryError::UnsupportedRepresentation(
                "H-polytope projection requires vertex enumeration first".into(),
            )),
        }
    }

    /// Canonical facet-listed form used by the exact measure engines.
    pub fn to_facet_form(&self) -> Result<FacetListedPolytope, GeometryError> {
        match self {
            ConvexBody::Facets(p) => Ok(p.clone()),
            ConvexBody::VPolytope(p) => p.build_facets(),
            ConvexBody::HPolytope(p) => p.enumerate_vertices()?.build_facets(),
            ConvexBody::AxisBox { halfwidths } => {
                SymVPolytope::new(box_generators(halfwidths))?.build_facets()
            }
            ConvexBody::Ball(_) | ConvexBody::Cylinder(_) => Err(
                GeometryError::UnsupportedRepresentation("smooth bodies have no facet form".into()),
            ),
        }
    }

    /// Halfwidths of the smallest axis-aligned symmetric bounding box.
    pub fn bounding_halfwidths(&self) -> Result<Vec<f64>, GeometryError> {
        let n = self.dim();
        match self {
            ConvexBody::AxisBox { halfwidths } => Ok(halfwidths.clone()),
            ConvexBody::Ball(b) => Ok(vec![b.r; n]),
            ConvexBody::Cylinder(c) => {
                let mut hw = vec![c.l; c.k];
                hw.extend(vec![1.0; c.n - c.k]);
                Ok(hw)
            }
            ConvexBody::VPolytope(p) => Ok((0..n)
                .map(|i| p.generators().iter().fold(0.0f64, |m, v| m.max(v[i].abs())))
                .collect()),
            ConvexBody::Facets(p) => Ok((0..n)
                .map(|i| p.vertex_set().iter().fold(0.0f64, |m, v| m.max(v[i].abs())))
                .collect()),
            ConvexBody::HPolytope(p) => {
                let v = p.enumerate_vertices()?;
                ConvexBody::VPolytope(v).bounding_halfwidths()
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ConvexBody::AxisBox { halfwidths } => format!("box{halfwidths:?}"),
            ConvexBody::HPolytope(p) => format!("hpolytope(m={}, n={})", p.pair_count(), p.dim()),
            ConvexBody::VPolytope(p) => {
                format!(
                    "vpolytope(gens={}, n={})",
                    p.generators().len(),
                    p.ambient_dim()
                )
            }
            ConvexBody::Facets(p) => format!("facets(m={}, n={})", p.facets().len(), p.dim()),
            ConvexBody::Ball(b) => format!("ball(n={}, r={})", b.n, b.r),
            ConvexBody::Cylinder(c) => format!("cylinder(n={}, k={}, l={})", c.n, c.k, c.l),
        }
    }
}

/// Generator half of the corner set of an axis box (first coordinate +).
pub(crate) fn box_generators(halfwidths: &[f64]) -> Vec<Vector> {
    let n = halfwidths.len();
    let mut out = Vec::with_capacity(1 << (n - 1));
    for mask in 0..(1usize << (n - 1)) {
        let mut v = Vec::with_capacity(n);
        v.push(halfwidths[0]);
        for (bit, &h) in halfwidths.iter().enumerate().skip(1) {
            let sign = if (mask >> (bit - 1)) & 1 == 1 {
                -1.0
            } else {
                1.0
            };
            v.push(sign * h);
        }
        out.push(Vector::from_unchecked(v));
    }
    out
}
