//! Random geometry for the fuzz suites: symmetric polytopes from sphere
//! directions with log-uniform radii in [0.5, 2], Gaussian-frame subspaces,
//! facet-aligned subspaces, rotations and equal-area polygon pairs.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::{FacetListedPolytope, Hull, Subspace, SymVPolytope};
use crate::linalg::{self, Vector};
use crate::quadrature::sphere_sample;

fn log_uniform_radius(rng: &mut ChaCha8Rng) -> f64 {
    let lo = 0.5f64.ln();
    let hi = 2.0f64.ln();
    (lo + (hi - lo) * rng.random::<f64>()).exp()
}

/// Symmetric polytope from `gens` random sphere directions with log-uniform
/// radii; retries until the generators span ℝⁿ.
pub fn random_symmetric_polytope(rng: &mut ChaCha8Rng, n: usize, gens: usize) -> SymVPolytope {
    loop {
        let points: Vec<Vector> = (0..gens.max(n))
            .map(|_| {
                let dir = sphere_sample(rng, n);
                Vector::from_unchecked(linalg::scale(&dir, log_uniform_radius(rng)))
            })
            .collect();
        if let Ok(p) = SymVPolytope::new(points) {
            if p.is_full_dimensional() {
                return p;
            }
        }
    }
}

/// Random symmetric polygon in the plane.
pub fn random_symmetric_polygon(rng: &mut ChaCha8Rng, gens: usize) -> SymVPolytope {
    random_symmetric_polytope(rng, 2, gens)
}

/// Subspace spanned by an orthonormalized Gaussian frame.
pub fn random_subspace(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Subspace {
    loop {
        let frame: Vec<Vector> = (0..k)
            .map(|_| Vector::from_unchecked(sphere_sample(rng, n)))
            .collect();
        if let Ok(l) = Subspace::from_spanning(&frame) {
            if l.dim() == k {
                return l;
            }
        }
    }
}

/// Subspace spanned by `k` facet normals of `p` (falling back to a Gaussian
/// frame when the drawn normals are dependent). Aligned subspaces make the
/// concentration numerator nonzero, which random frames almost never do.
pub fn random_subspace_aligned(
    rng: &mut ChaCha8Rng,
    p: &FacetListedPolytope,
    k: usize,
) -> Subspace {
    let m = p.facets().len();
    for _ in 0..16 {
        let mut picks: Vec<usize> = Vec::new();
        while picks.len() < k {
            let i = rng.random_range(0..m);
            if !picks.contains(&i) {
                picks.push(i);
            }
        }
        let frame: Vec<Vector> = picks
            .iter()
            .map(|&i| p.facets()[i].normal.clone())
            .collect();
        if let Ok(l) = Subspace::from_spanning(&frame) {
            if l.dim() == k {
                return l;
            }
        }
    }
    random_subspace(rng, p.dim(), k)
}

/// Haar-ish random rotation: orthonormalized Gaussian rows with a
/// determinant sign fix. Returned as rows of R (x ↦ Rx).
pub fn random_rotation(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    loop {
        let raw: Vec<Vec<f64>> = (0..n).map(|_| sphere_sample(rng, n)).collect();
        let mut basis = linalg::orthonormalize(&raw, 1e-8);
        if basis.len() != n {
            continue;
        }
        if linalg::det(&basis) < 0.0 {
            for v in basis[0].iter_mut() {
                *v = -*v;
            }
        }
        return basis;
    }
}

/// Two equal-area symmetric-generated polygons embedded in the parallel
/// planes z = z0 and z = z1 of ℝ³, with small random in-plane offsets.
pub fn random_equal_area_polygon_pair(
    rng: &mut ChaCha8Rng,
    gens: usize,
    z0: f64,
    z1: f64,
) -> (Hull, Hull) {
    loop {
        let p0 = random_symmetric_polygon(rng, gens);
        let p1 = random_symmetric_polygon(rng, gens);
        let cycle0 = linalg::hull_2d(&p0.full_vertices());
        let cycle1 = linalg::hull_2d(&p1.full_vertices());
        if cycle0.len() < 3 || cycle1.len() < 3 {
            continue;
        }
        let a0 = linalg::polygon_area(&cycle0);
        let a1 = linalg::polygon_area(&cycle1);
        if a0 <= 1e-6 || a1 <= 1e-6 {
            continue;
        }
        let scale = (a0 / a1).sqrt();
        let off0 = [rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5];
        let off1 = [rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5];
        let embed = |cycle: &[Vec<f64>], s: f64, off: &[f64; 2], z: f64| -> Hull {
            Hull::new(
                cycle
                    .iter()
                    .map(|v| Vector::from_unchecked(vec![s * v[0] + off[0], s * v[1] + off[1], z]))
                    .collect(),
            )
            .expect("embedded polygon is nonempty")
        };
        return (
            embed(&cycle0, 1.0, &off0, z0),
            embed(&cycle1, scale, &off1, z1),
        );
    }
}
