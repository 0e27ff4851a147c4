//! Numerical dual Brunn–Minkowski geometry for origin-symmetric convex
//! bodies: dual curvature measures C̃_q(K,η), cone-volume measures, dual
//! quermassintegrals, moment integrals of the Euclidean norm, and subspace
//! concentration ratios — each computed by closed forms, exact facet
//! decomposition, or seeded Monte Carlo, and cross-checked against one
//! another.
//!
//! The `lab` module turns the concentration bounds and the moment
//! Brunn–Minkowski inequality into executable checkers and fuzz suites.

// `!(x > 0.0)`-style guards reject NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// The dense kernels keep textbook indexed elimination loops.
#![allow(clippy::needless_range_loop)]

pub mod geometry;
pub mod lab;
pub mod linalg;
pub mod measures;
pub mod quadrature;

pub use geometry::{ConvexBody, GeometryError, NormalSelection, Subspace};
pub use linalg::Vector;
pub use quadrature::{QuadratureResult, RngSeed};
