//! Symmetric H-polytopes {x : |⟨uᵢ,x⟩| ≤ bᵢ} and brute-force vertex
//! enumeration (all n-subsets of active hyperplanes, desk-scale budgets).

use crate::linalg::{self, Vector};

use super::{GeometryError, SymVPolytope};

#[derive(Debug, Clone)]
pub struct SymHPolytope {
    normals: Vec<Vector>,
    offsets: Vec<f64>,
}

impl SymHPolytope {
    /// Validates unit normals (1e−12), positive offsets, spanning normals
    /// (boundedness) and absence of duplicate ±normal pairs.
    pub fn new(normals: Vec<Vector>, offsets: Vec<f64>) -> Result<Self, GeometryError> {
        if normals.is_empty() || normals.len() != offsets.len() {
            return Err(GeometryError::InvalidParameter(
                "normals and offsets must be nonempty lists of equal length".into(),
            ));
        }
        let n = normals[0].dim();
        for u in &normals {
            if u.dim() != n {
                return Err(GeometryError::DimensionMismatch {
                    expected: n,
                    got: u.dim(),
                });
            }
            if (linalg::norm(u) - 1.0).abs() > 1e-12 {
                return Err(GeometryError::NotUnit);
            }
        }
        if offsets.iter().any(|&b| !(b > 0.0) || !b.is_finite()) {
            return Err(GeometryError::NonPositiveOffset);
        }
        let raw: Vec<Vec<f64>> = normals.iter().map(|u| u.to_vec()).collect();
        if linalg::rank(&raw, 1e-10) < n {
            return Err(GeometryError::Unbounded);
        }
        for i in 0..normals.len() {
            for j in (i + 1)..normals.len() {
                let d_plus = linalg::dist(&normals[i], &normals[j]);
                let d_minus = linalg::dist(&normals[i], &linalg::scale(&normals[j], -1.0));
                if d_plus.min(d_minus) <= 1e-9 {
                    return Err(GeometryError::DuplicateNormal);
                }
            }
        }
        Ok(SymHPolytope { normals, offsets })
    }

    pub fn dim(&self) -> usize {
        self.normals[0].dim()
    }

    /// Number of ±normal pairs.
    pub fn pair_count(&self) -> usize {
        self.normals.len()
    }

    pub fn normals(&self) -> &[Vector] {
        &self.normals
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn radial(&self, x: &[f64]) -> Result<f64, GeometryError> {
        if linalg::norm(x) == 0.0 {
            return Err(GeometryError::ZeroDirection);
        }
        let mut rho = f64::INFINITY;
        for (u, &b) in self.normals.iter().zip(&self.offsets) {
            let d = linalg::dot(u, x).abs();
            if d > 0.0 {
                rho = rho.min(b / d);
            }
        }
        Ok(rho)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.normals
            .iter()
            .zip(&self.offsets)
            .all(|(u, &b)| linalg::dot(u, x).abs() <= b * (1.0 + tol))
    }

    /// Brute-force vertex enumeration: intersect all n-subsets of the 2m
    /// bounding hyperplanes, keep feasible nondegenerate intersection points,
    /// deduplicate within 1e−9. Budget: n ≤ 4 and m ≤ 40.
    pub fn enumerate_vertices(&self) -> Result<SymVPolytope, GeometryError> {
        let n = self.dim();
        let m = self.normals.len();
        if n > 4 {
            return Err(GeometryError::BudgetExceeded(format!(
                "vertex enumeration supports n ≤ 4, got {n}"
            )));
        }
        if m > 40 {
            return Err(GeometryError::BudgetExceeded(format!(
                "vertex enumeration supports m ≤ 40 normal pairs, got {m}"
            )));
        }

        let scale_ref = self.offsets.iter().cloned().fold(1e-12, f64::max);
        let mut vertices: Vec<Vec<f64>> = Vec::new();
        // Choose n of the m pairs, then all 2ⁿ sign assignments; subsets
        // containing both members of one pair are parallel and skipped by
        // construction.
        let mut pair_idx: Vec<usize> = (0..n).collect();
        loop {
            for signs in 0..(1usize << n) {
                let rows: Vec<Vec<f64>> = pair_idx
                    .iter()
                    .enumerate()
                    .map(|(slot, &i)| {
                        let s = if (signs >> slot) & 1 == 1 { -1.0 } else { 1.0 };
                        linalg::scale(&self.normals[i], s)
                    })
                    .collect();
                let rhs: Vec<f64> = pair_idx.iter().map(|&i| self.offsets[i]).collect();
                let Some(x) = linalg::solve(&rows, &rhs, 1e-10) else {
                    continue;
                };
                if !self.contains(&x, 1e-9) {
                    continue;
                }
                if !vertices
                    .iter()
                    .any(|v| linalg::dist(v, &x) <= 1e-9 * scale_ref)
                {
                    vertices.push(x);
                }
            }
            // next combination of pairs
            let mut i = n;
            let mut done = false;
            loop {
                if i == 0 {
                    done = true;
                    break;
                }
                i -= 1;
                if pair_idx[i] != i + m - n {
                    break;
                }
                if i == 0 {
                    done = true;
                    break;
                }
            }
            if done {
                break;
            }
            pair_idx[i] += 1;
            for j in (i + 1)..n {
                pair_idx[j] = pair_idx[j - 1] + 1;
            }
        }

        if vertices.is_empty() {
            return Err(GeometryError::Degenerate(
                "no vertices found; inconsistent constraint system".into(),
            ));
        }
        // Keep one representative per ± pair.
        let mut gens: Vec<Vector> = Vec::new();
        for v in &vertices {
            let neg = linalg::scale(v, -1.0);
            let seen = gens.iter().any(|g| {
                linalg::dist(g, v) <= 1e-9 * scale_ref || linalg::dist(g, &neg) <= 1e-9 * scale_ref
            });
            if !seen {
                gens.push(Vector::from_unchecked(v.clone()));
            }
        }
        SymVPolytope::new(gens)
    }
}
