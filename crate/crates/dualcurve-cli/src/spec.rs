//! JSON body and subspace specifications.

use serde::{Deserialize, Serialize};

use dualcurve::geometry::{
    parallelotope, prism, Ball, ConvexBody, Cylinder, SymHPolytope, SymVPolytope,
};
use dualcurve::{Subspace, Vector};

/// Discriminated body description; `type` selects the variant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodySpec {
    Box {
        halfwidths: Vec<f64>,
    },
    HpolytopeSym {
        normals: Vec<Vec<f64>>,
        offsets: Vec<f64>,
    },
    VpolytopeSym {
        vertices: Vec<Vec<f64>>,
    },
    Ball {
        n: usize,
        r: f64,
    },
    Cylinder {
        n: usize,
        k: usize,
        l: f64,
    },
    Parallelotope {
        matrix: Vec<Vec<f64>>,
    },
    Prism {
        base_vertices: Vec<Vec<f64>>,
        apex: Vec<f64>,
    },
}

fn vectors(field: &str, rows: &[Vec<f64>]) -> Result<Vec<Vector>, String> {
    rows.iter()
        .enumerate()
        .map(|(i, row)| Vector::from_slice(row).map_err(|e| format!("{field}[{i}]: {e}")))
        .collect()
}

impl BodySpec {
    pub fn to_body(&self) -> Result<ConvexBody, String> {
        match self {
            BodySpec::Box { halfwidths } => {
                ConvexBody::axis_box(halfwidths.clone()).map_err(|e| format!("halfwidths: {e}"))
            }
            BodySpec::HpolytopeSym { normals, offsets } => {
                let normals = vectors("normals", normals)?;
                let p = SymHPolytope::new(normals, offsets.clone())
                    .map_err(|e| format!("normals/offsets: {e}"))?;
                Ok(ConvexBody::HPolytope(p))
            }
            BodySpec::VpolytopeSym { vertices } => {
                let gens = vectors("vertices", vertices)?;
                let p = SymVPolytope::new(gens).map_err(|e| format!("vertices: {e}"))?;
                Ok(ConvexBody::VPolytope(p))
            }
            BodySpec::Ball { n, r } => Ball::new(*n, *r)
                .map(ConvexBody::Ball)
                .map_err(|e| format!("ball: {e}")),
            BodySpec::Cylinder { n, k, l } => Cylinder::new(*n, *k, *l)
                .map(ConvexBody::Cylinder)
                .map_err(|e| format!("cylinder: {e}")),
            BodySpec::Parallelotope { matrix } => {
                let p = parallelotope(matrix).map_err(|e| format!("matrix: {e}"))?;
                Ok(ConvexBody::VPolytope(p))
            }
            BodySpec::Prism {
                base_vertices,
                apex,
            } => {
                let base = vectors("base_vertices", base_vertices)?;
                let apex = Vector::from_slice(apex).map_err(|e| format!("apex: {e}"))?;
                let p = prism(&base, &apex).map_err(|e| format!("base_vertices/apex: {e}"))?;
                Ok(ConvexBody::VPolytope(p))
            }
        }
    }
}

/// A subspace as a list of basis vectors (orthonormalized on load).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceSpec {
    pub basis: Vec<Vec<f64>>,
}

impl SubspaceSpec {
    pub fn to_subspace(&self) -> Result<Subspace, String> {
        let basis = vectors("basis", &self.basis)?;
        Subspace::from_spanning(&basis).map_err(|e| format!("basis: {e}"))
    }
}
