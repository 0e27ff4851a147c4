//! Small dense vector/matrix kernels for low-dimensional geometry (n ≤ 4 in
//! the brute-force paths, arbitrary n elsewhere).
//!
//! Everything operates on `&[f64]` slices; [`Vector`] is the validated
//! newtype used at module boundaries.

use std::ops::Deref;

use crate::geometry::GeometryError;

/// A point or direction in ℝⁿ with finite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(Vec<f64>);

impl Vector {
    /// Builds a vector, rejecting NaN/∞ entries and the empty coordinate list.
    pub fn new(coords: Vec<f64>) -> Result<Self, GeometryError> {
        if coords.is_empty() {
            return Err(GeometryError::EmptyVector);
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(GeometryError::NonFiniteCoordinate);
        }
        Ok(Vector(coords))
    }

    /// Infallible constructor for coordinates already known to be finite.
    pub(crate) fn from_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty() && coords.iter().all(|c| c.is_finite()));
        Vector(coords)
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self, GeometryError> {
        Self::new(coords.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Vector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl AsRef<[f64]> for Vector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

pub fn norm(a: &[f64]) -> f64 {
    norm_sq(a).sqrt()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// `s·a + t·b`.
pub fn lin_comb(s: f64, a: &[f64], t: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| s * x + t * y).collect()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn normalize(a: &[f64]) -> Option<Vec<f64>> {
    let n = norm(a);
    if n == 0.0 || !n.is_finite() {
        None
    } else {
        Some(scale(a, 1.0 / n))
    }
}

/// Standard basis vector e_i in ℝⁿ.
pub fn basis_vector(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}

/// Solves the n×n system `A x = b` by Gaussian elimination with partial
/// pivoting. `a` holds rows. Returns `None` when the matrix is singular
/// relative to `pivot_tol` times the largest row scale.
pub fn solve(a: &[Vec<f64>], b: &[f64], pivot_tol: f64) -> Option<Vec<f64>> {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n) && b.len() == n);
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    let scale_ref = m
        .iter()
        .flat_map(|r| r[..n].iter())
        .fold(0.0f64, |acc, &x| acc.max(x.abs()))
        .max(1e-300);
    for col in 0..n {
        let (pivot_row, pivot_abs) = (col..n)
            .map(|r| (r, m[r][col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if pivot_abs <= pivot_tol * scale_ref {
            return None;
        }
        m.swap(col, pivot_row);
        for r in (col + 1)..n {
            let f = m[r][col] / m[col][col];
            if f != 0.0 {
                for c in col..=n {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = m[row][n];
        for c in (row + 1)..n {
            s -= m[row][c] * x[c];
        }
        x[row] = s / m[row][row];
    }
    Some(x)
}

/// Determinant of a small dense matrix (rows), by elimination.
pub fn det(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut sign = 1.0;
    let mut d = 1.0;
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))
            .unwrap();
        if m[pivot_row][col] == 0.0 {
            return 0.0;
        }
        if pivot_row != col {
            m.swap(col, pivot_row);
            sign = -sign;
        }
        d *= m[col][col];
        for r in (col + 1)..n {
            let f = m[r][col] / m[col][col];
            for c in col..n {
                m[r][c] -= f * m[col][c];
            }
        }
    }
    sign * d
}

/// Inverse of an n×n matrix, or `None` when singular.
pub fn invert(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        cols.push(solve(a, &basis_vector(n, i), 1e-13)?);
    }
    // cols[i] is the i-th column of A⁻¹; transpose into rows.
    let mut inv = vec![vec![0.0; n]; n];
    for (i, col) in cols.iter().enumerate() {
        for (r, &v) in col.iter().enumerate() {
            inv[r][i] = v;
        }
    }
    Some(inv)
}

/// Modified Gram–Schmidt. Returns an orthonormal basis of the span of the
/// inputs; vectors whose residual is ≤ `tol` times the largest input norm
/// are dropped (the scale is global, so pure-roundoff difference vectors do
/// not masquerade as new directions).
pub fn orthonormalize(vectors: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let scale_ref = vectors
        .iter()
        .map(|v| norm(v))
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        // Two passes of re-orthogonalization keep the basis orthonormal to ~1e-15.
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&w, b);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c * bi;
                }
            }
        }
        let r = norm(&w);
        if r > tol * scale_ref {
            basis.push(scale(&w, 1.0 / r));
        }
    }
    basis
}

/// Rank of the span of `vectors` at tolerance `tol` (relative per vector).
pub fn rank(vectors: &[Vec<f64>], tol: f64) -> usize {
    orthonormalize(vectors, tol).len()
}

/// Unit normal of the hyperplane spanned by `dirs` (n−1 independent
/// directions in ℝⁿ), or `None` when the directions are degenerate.
pub fn hyperplane_normal(dirs: &[Vec<f64>], n: usize) -> Option<Vec<f64>> {
    let basis = orthonormalize(dirs, 1e-10);
    if basis.len() != n - 1 {
        return None;
    }
    // Any vector minus its projection onto the span; try coordinate axes
    // until one has a usable residual.
    for axis in 0..n {
        let mut w = basis_vector(n, axis);
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&w, b);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c * bi;
                }
            }
        }
        let r = norm(&w);
        if r > 1e-7 {
            return Some(scale(&w, 1.0 / r));
        }
    }
    None
}

/// Gram-determinant k-volume of the simplex with the given vertices
/// (k = vertices.len() − 1), embedded in any ℝⁿ.
pub fn simplex_volume(vertices: &[Vec<f64>]) -> f64 {
    let k = vertices.len() - 1;
    if k == 0 {
        return 0.0;
    }
    let edges: Vec<Vec<f64>> = vertices[1..].iter().map(|v| sub(v, &vertices[0])).collect();
    let mut gram = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..k {
            gram[i][j] = dot(&edges[i], &edges[j]);
        }
    }
    let g = det(&gram);
    let mut factorial = 1.0;
    for i in 1..=k {
        factorial *= i as f64;
    }
    g.max(0.0).sqrt() / factorial
}

/// Convex hull of 2D points (Andrew monotone chain), counterclockwise, no
/// duplicate endpoints. Collinear boundary points are dropped.
pub fn hull_2d(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut pts: Vec<Vec<f64>> = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup_by(|a, b| dist(a, b) <= 1e-12);
    if pts.len() <= 2 {
        return pts;
    }
    let cross = |o: &[f64], a: &[f64], b: &[f64]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let scale_ref = pts
        .iter()
        .flat_map(|p| p.iter())
        .fold(0.0f64, |m, &x| m.max(x.abs()))
        .max(1.0);
    let eps = 1e-12 * scale_ref * scale_ref;
    let build = |iter: &mut dyn Iterator<Item = &Vec<f64>>| {
        let mut chain: Vec<Vec<f64>> = Vec::new();
        for p in iter {
            while chain.len() >= 2
                && cross(&chain[chain.len() - 2], &chain[chain.len() - 1], p) <= eps
            {
                chain.pop();
            }
            chain.push(p.clone());
        }
        chain.pop();
        chain
    };
    let mut hull = build(&mut pts.iter());
    hull.extend(build(&mut pts.iter().rev()));
    hull
}

/// Signed polygon area (shoelace) for a counterclockwise 2D vertex cycle.
pub fn polygon_area(cycle: &[Vec<f64>]) -> f64 {
    let m = cycle.len();
    let mut s = 0.0;
    for i in 0..m {
        let a = &cycle[i];
        let b = &cycle[(i + 1) % m];
        s += a[0] * b[1] - a[1] * b[0];
    }
    0.5 * s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_and_det_agree_on_identity() {
        let a = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        assert_eq!(det(&a), 1.0);
        let x = solve(&a, &[3.0, 4.0], 1e-13).unwrap();
        assert_eq!(x, vec![3.0, 4.0]);
    }

    #[test]
    fn solve_rejects_singular() {
        let a = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(solve(&a, &[1.0, 1.0], 1e-13).is_none());
    }

    #[test]
    fn invert_roundtrip() {
        let a = vec![
            vec![2.0, 1.0, 0.0],
            vec![0.0, 3.0, 1.0],
            vec![1.0, 0.0, 1.0],
        ];
        let inv = invert(&a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for k in 0..3 {
                    s += a[i][k] * inv[k][j];
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((s - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn orthonormalize_drops_dependent() {
        let basis = orthonormalize(
            &[
                vec![1.0, 0.0, 0.0],
                vec![2.0, 0.0, 0.0],
                vec![0.0, 1.0, 1.0],
            ],
            1e-10,
        );
        assert_eq!(basis.len(), 2);
        assert!((dot(&basis[0], &basis[1])).abs() < 1e-14);
    }

    #[test]
    fn hyperplane_normal_of_plane_through_e1_e2() {
        let n = hyperplane_normal(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]], 3).unwrap();
        assert!((n[2].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn simplex_volume_triangle() {
        let v = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        assert!((simplex_volume(&v) - 0.5).abs() < 1e-15);
        // Embedded in R^3 with the same edge lengths.
        let v3 = vec![
            vec![0.0, 0.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 1.0],
        ];
        assert!((simplex_volume(&v3) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn hull_2d_square_with_interior_point() {
        let pts = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            vec![0.5, 0.5],
        ];
        let hull = hull_2d(&pts);
        assert_eq!(hull.len(), 4);
        assert!((polygon_area(&hull) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn vector_rejects_nan() {
        assert!(Vector::new(vec![1.0, f64::NAN]).is_err());
        assert!(Vector::new(vec![]).is_err());
    }
}
