//! Dual curvature measures C̃_q(K,η), cone-volume measures, dual
//! quermassintegrals, moment integrals and subspace concentration ratios.
//!
//! For q > 0 the engines use the cone change of variables
//! C̃_q(K,η) = (q/n)·∫ |x|^{q−n} dx over the radial cone region of η; on a
//! facet F with offset h this collapses to (h/n)·∫_F |z|^{q−n} dH^{n−1},
//! because x = r·z maps F×(0,1] onto the cone with volume element
//! r^{n−1}·h·dr·dH^{n−1} and ∫₀¹ r^{q−1} dr = 1/q. The sphere engine
//! evaluates the defining integral (1/n)·∫_{α*(η)} ρ_K(u)^q dH^{n−1}
//! directly and is the only engine admitting q ≤ 0.

mod cylinder;
mod moment;

pub use cylinder::{cylinder_dcm_subspace, cylinder_dcm_total, cylinder_ratio_limit};
pub use moment::{moment_integral, moment_of_body};

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{
    ConvexBody, FacetListedPolytope, GeometryError, NormalSelection, Subspace, FACET_ACTIVITY_TOL,
    SUBSPACE_MEMBERSHIP_TOL,
};
use crate::linalg;
use crate::quadrature::{
    self, facet_area, mc_body_integrate, mc_body_integrate_radial, mc_sphere_integrate,
    simplex_integrate, triangulate_facet, QuadratureError, RngSeed,
};

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("q = {0} requires the sphere-mc engine (body engines need q > 0)")]
    NonPositiveQ(f64),
    #[error("engine/representation mismatch: {0}")]
    EngineMismatch(String),
    #[error("total measure is numerically zero; ratio undefined")]
    DegenerateTotal,
    #[error("invalid selection: {0}")]
    InvalidSelection(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Which measure engine produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EngineTag {
    FacetExact,
    BodyMc,
    SphereMc,
    ClosedForm,
}

impl EngineTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            EngineTag::FacetExact => "facet-exact",
            EngineTag::BodyMc => "body-mc",
            EngineTag::SphereMc => "sphere-mc",
            EngineTag::ClosedForm => "closed-form",
        }
    }
}

/// Engine selection for [`dual_curvature`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EngineChoice {
    #[default]
    Auto,
    FacetExact,
    BodyMc,
    SphereMc,
    ClosedForm,
}

impl std::str::FromStr for EngineChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(EngineChoice::Auto),
            "facet" => Ok(EngineChoice::FacetExact),
            "body-mc" => Ok(EngineChoice::BodyMc),
            "sphere-mc" => Ok(EngineChoice::SphereMc),
            "closed" => Ok(EngineChoice::ClosedForm),
            other => Err(format!(
                "unknown engine {other:?}; expected auto|facet|body-mc|sphere-mc|closed"
            )),
        }
    }
}

/// Numerical budgets shared by the engines.
#[derive(Debug, Clone, Copy)]
pub struct MeasureConfig {
    pub engine: EngineChoice,
    pub samples: u64,
    pub seed: RngSeed,
    pub simplex_degree: usize,
    pub gl_nodes: usize,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        MeasureConfig {
            engine: EngineChoice::Auto,
            samples: 200_000,
            seed: RngSeed::default(),
            simplex_degree: 10,
            gl_nodes: 64,
        }
    }
}

impl MeasureConfig {
    pub fn with_engine(mut self, engine: EngineChoice) -> Self {
        self.engine = engine;
        self
    }

    pub fn with_seed(mut self, seed: RngSeed) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_samples(mut self, samples: u64) -> Self {
        self.samples = samples;
        self
    }

    /// Budgets refined for re-evaluating violation candidates.
    pub fn refined(&self) -> MeasureConfig {
        MeasureConfig {
            engine: self.engine,
            samples: self.samples.saturating_mul(10),
            seed: self.seed,
            simplex_degree: (self.simplex_degree + 6).min(25),
            gl_nodes: (self.gl_nodes * 2).min(200),
        }
    }
}

/// A measure value with its error estimate and provenance.
#[derive(Debug, Clone, Serialize)]
pub struct MeasureEstimate {
    pub value: f64,
    pub abs_error: f64,
    pub engine: EngineTag,
    pub q: f64,
    pub body: String,
    pub selection: String,
    pub nodes_or_samples: u64,
}

/// Which concentration bound applies to a (body, L, q) triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    /// q ≥ n+1 for arbitrary symmetric bodies: (q−n+dim L)/q, strict.
    QAtLeastNPlusOne,
    /// q = n (cone-volume measure): dim L/n, non-strict.
    ConeVolume,
    /// 0 < q < n: min{dim L/q, 1}, strict.
    Subcritical,
    /// n = 2, q > 2: (q−1)/q, strict.
    Planar,
    /// Parallelotopes with q > n, covering the open band q ∈ (n, n+1).
    Parallelotope,
    /// q ∈ (n, n+1), n ≥ 3, general body: open, no bound asserted.
    None,
}

impl BoundKind {
    pub fn is_strict(&self) -> bool {
        !matches!(self, BoundKind::ConeVolume | BoundKind::None)
    }
}

/// Subspace concentration ratio with the applicable bound.
#[derive(Debug, Clone, Serialize)]
pub struct RatioReport {
    pub ratio: f64,
    pub bound: Option<f64>,
    pub bound_kind: BoundKind,
    pub satisfied: bool,
    pub margin: Option<f64>,
    pub subspace_measure: MeasureEstimate,
    pub total_measure: MeasureEstimate,
    pub q: f64,
    pub dim_l: usize,
}

fn polytope_engine_guard(p: &FacetListedPolytope, q: f64) -> Result<(), MeasureError> {
    if !(q > 0.0) {
        return Err(MeasureError::NonPositiveQ(q));
    }
    if !p.is_symmetric() {
        return Err(MeasureError::EngineMismatch(
            "facet engine requires an origin-symmetric polytope".into(),
        ));
    }
    Ok(())
}

/// C̃_q(P, {u_i}) for one facet: (h_i/n)·∫_{F_i} |z|^{q−n} dH^{n−1}(z).
pub fn facet_dual_curvature(
    p: &FacetListedPolytope,
    facet_index: usize,
    q: f64,
    cfg: &MeasureConfig,
) -> Result<MeasureEstimate, MeasureError> {
    polytope_engine_guard(p, q)?;
    let n = p.dim();
    let facet = p.facet(facet_index)?;
    let exponent = q - n as f64;
    let mut value = 0.0;
    let mut err = 0.0;
    let mut nodes = 0u64;
    if exponent == 0.0 {
        // q = n: the integrand is 1, the integral is the facet area.
        value = facet_area(facet)?;
        err = 1e-12 * value;
    } else {
        for simplex in triangulate_facet(facet)? {
            let r = simplex_integrate(
                |z| linalg::norm(z).powf(exponent),
                &simplex,
                cfg.simplex_degree,
            )?;
            value += r.value;
            err += r.abs_error;
            nodes += r.nodes_or_samples;
        }
    }
    let scale = facet.offset / n as f64;
    Ok(MeasureEstimate {
        value: scale * value,
        abs_error: scale * err,
        engine: EngineTag::FacetExact,
        q,
        body: format!("facets(m={}, n={})", p.facets().len(), n),
        selection: format!("facet {facet_index}"),
        nodes_or_samples: nodes,
    })
}

/// Resolves a selection to facet indices. A SubspaceCap picks exactly the
/// facets whose normals lie in L, since C̃_q of a polytope is concentrated
/// on the finitely many facet normals.
pub fn resolve_selection(
    p: &FacetListedPolytope,
    eta: &NormalSelection,
) -> Result<Vec<usize>, MeasureError> {
    match eta {
        NormalSelection::FullSphere => Ok((0..p.facets().len()).collect()),
        NormalSelection::FacetSubset(ids) => {
            for &i in ids {
                if i >= p.facets().len() {
                    return Err(MeasureError::InvalidSelection(format!(
                        "facet index {i} out of range for {} facets",
                        p.facets().len()
                    )));
                }
            }
            Ok(ids.clone())
        }
        NormalSelection::SubspaceCap(l) => {
            if l.ambient_dim() != p.dim() {
                return Err(MeasureError::InvalidSelection(
                    "subspace ambient dimension mismatch".into(),
                ));
            }
            Ok(p.facets_in_subspace(l))
        }
    }
}

fn facet_engine(
    p: &FacetListedPolytope,
    eta: &NormalSelection,
    q: f64,
    cfg: &MeasureConfig,
) -> Result<MeasureEstimate, MeasureError> {
    let ids = resolve_selection(p, eta)?;
    let mut value = 0.0;
    let mut err = 0.0;
    let mut nodes = 0u64;
    for i in ids {
        let m = facet_dual_curvature(p, i, q, cfg)?;
        value += m.value;
        err += m.abs_error;
        nodes += m.nodes_or_samples;
    }
    Ok(MeasureEstimate {
        value,
        abs_error: err,
        engine: EngineTag::FacetExact,
        q,
        body: format!("facets(m={}, n={})", p.facets().len(), p.dim()),
        selection: eta.describe(),
        nodes_or_samples: nodes,
    })
}

type Indicator<'a> = Box<dyn Fn(&[f64]) -> bool + 'a>;

/// α*-membership indicator for the supported (body, selection) pairs.
fn alpha_star_indicator<'a>(
    body: &'a ConvexBody,
    eta: &'a NormalSelection,
) -> Result<Indicator<'a>, MeasureError> {
    match (body, eta) {
        (_, NormalSelection::FullSphere) => Ok(Box::new(|_| true)),
        (ConvexBody::Facets(p), _) => Ok(Box::new(move |u: &[f64]| {
            p.reverse_radial_gauss_contains(eta, u, FACET_ACTIVITY_TOL)
                .unwrap_or(false)
        })),
        (ConvexBody::Ball(_), NormalSelection::SubspaceCap(l)) => {
            // The outer normal at ρ(u)·u is u itself, so α*(S∩L) = S∩L,
            // which has H^{n−1} measure zero.
            Ok(Box::new(move |u: &[f64]| {
                l.residual(u) <= SUBSPACE_MEMBERSHIP_TOL
            }))
        }
        (ConvexBody::Cylinder(c), NormalSelection::SubspaceCap(l)) => {
            if l.is_coordinate_block(c.k) {
                // Lateral boundary: the scaled block constraint binds.
                let (k, scale) = (c.k, c.l);
                Ok(Box::new(move |u: &[f64]| {
                    scale * linalg::norm(&u[k..]) <= linalg::norm(&u[..k])
                }))
            } else if is_complement_block(l, c.n, c.k) {
                let (k, scale) = (c.k, c.l);
                Ok(Box::new(move |u: &[f64]| {
                    scale * linalg::norm(&u[k..]) >= linalg::norm(&u[..k])
                }))
            } else {
                Err(MeasureError::EngineMismatch(
                    "cylinder selections must be the axis block or its complement".into(),
                ))
            }
        }
        _ => Err(MeasureError::EngineMismatch(format!(
            "no α* indicator for {} with {}",
            body.describe(),
            eta.describe()
        ))),
    }
}

fn is_complement_block(l: &Subspace, n: usize, k: usize) -> bool {
    if l.dim() != n - k {
        return false;
    }
    (k..n).all(|i| l.residual(&linalg::basis_vector(n, i)) <= 1e-9)
}

fn sphere_engine(
    body: &ConvexBody,
    eta: &NormalSelection,
    q: f64,
    cfg: &MeasureConfig,
) -> Result<MeasureEstimate, MeasureError> {
    let canonical = canonicalize_for_sampling(body)?;
    let n = canonical.dim();
    let indicator = alpha_star_indicator(&canonical, eta)?;
    let r = mc_sphere_integrate(
        |u| {
            if indicator(u) {
                canonical.radial(u).map(|rho| rho.powf(q)).unwrap_or(0.0)
            } else {
                0.0
            }
        },
        n,
        cfg.samples,
        cfg.seed,
    )?;
    Ok(MeasureEstimate {
        value: r.value / n as f64,
        abs_error: r.abs_error / n as f64,
        engine: EngineTag::SphereMc,
        q,
        body: body.describe(),
        selection: eta.describe(),
        nodes_or_samples: r.nodes_or_samples,
    })
}

fn body_engine(
    body: &ConvexBody,
    eta: &NormalSelection,
    q: f64,
    cfg: &MeasureConfig,
) -> Result<MeasureEstimate, MeasureError> {
    if !(q > 0.0) {
        return Err(MeasureError::NonPositiveQ(q));
    }
    let canonical = canonicalize_for_sampling(body)?;
    let n = canonical.dim();
    let exponent = q - n as f64;
    let indicator = alpha_star_indicator(&canonical, eta)?;
    let f = |x: &[f64]| {
        let norm = linalg::norm(x);
        if norm == 0.0 {
            return 0.0;
        }
        let u = linalg::scale(x, 1.0 / norm);
        if indicator(&u) {
            norm.powf(exponent)
        } else {
            0.0
        }
    };
    // The direct ball/cylinder samplers switch to radial importance
    // weighting when q ≤ n−1, where |x|^{q−n} makes the uniform estimator
    // heavy-tailed.
    let use_radial =
        matches!(canonical, ConvexBody::Ball(_) | ConvexBody::Cylinder(_)) && q <= (n - 1) as f64;
    let r = if use_radial {
        mc_body_integrate_radial(f, &canonical, q, cfg.samples, cfg.seed)?
    } else {
        mc_body_integrate(f, &canonical, cfg.samples, cfg.seed)?
    };
    let scale = q / n as f64;
    Ok(MeasureEstimate {
        value: scale * r.value,
        abs_error: scale * r.abs_error,
        engine: EngineTag::BodyMc,
        q,
        body: body.describe(),
        selection: eta.describe(),
        nodes_or_samples: r.nodes_or_samples,
    })
}

fn closed_form_engine(
    body: &ConvexBody,
    eta: &NormalSelection,
    q: f64,
    cfg: &MeasureConfig,
) -> Result<MeasureEstimate, MeasureError> {
    match body {
        ConvexBody::Ball(b) => {
            let total = quadrature::omega(b.n) * b.r.powf(q);
            let value = match eta {
                NormalSelection::FullSphere => total,
                NormalSelection::SubspaceCap(_) => 0.0,
                NormalSelection::FacetSubset(_) => {
                    return Err(MeasureError::EngineMismatch(
                        "a ball has no facets to select".into(),
                    ))
                }
            };
            Ok(MeasureEstimate {
                value,
                abs_error: 1e-14 * value.abs(),
                engine: EngineTag::ClosedForm,
                q,
                body: body.describe(),
                selection: eta.describe(),
                nodes_or_samples: 0,
            })
        }
        ConvexBody::Cylinder(c) => {
            if !(q > 0.0) {
                return Err(MeasureError::NonPositiveQ(q));
            }
            match eta {
                NormalSelection::FullSphere => cylinder_dcm_total(q, c.n, c.k, c.l, cfg),
                NormalSelection::SubspaceCap(l) => {
                    if l.is_coordinate_block(c.k) {
                        cylinder_dcm_subspace(q, c.n, c.k, c.l, cfg)
                    } else if is_complement_block(l, c.n, c.k) {
                        // Lateral and cap regions partition the sphere of
                        // directions up to measure zero.
                        let total = cylinder_dcm_total(q, c.n, c.k, c.l, cfg)?;
                        let lateral = cylinder_dcm_subspace(q, c.n, c.k, c.l, cfg)?;
                        Ok(MeasureEstimate {
                            value: (total.value - lateral.value).max(0.0),
                            abs_error: total.abs_error + lateral.abs_error,
                            engine: EngineTag::ClosedForm,
                            q,
                            body: body.describe(),
                            selection: eta.describe(),
                            nodes_or_samples: total.nodes_or_samples + lateral.nodes_or_samples,
                        })
                    } else {
                        Err(MeasureError::EngineMismatch(
                            "cylinder selections must be the axis block or its complement".into(),
                        ))
                    }
                }
                NormalSelection::FacetSubset(_) => Err(MeasureError::EngineMismatch(
                    "a cylinder has no facets to select".into(),
                )),
            }
        }
        _ => Err(MeasureError::EngineMismatch(
            "closed forms exist only for balls and cylinders".into(),
        )),
    }
}

fn canonicalize_for_sampling(body: &ConvexBody) -> Result<ConvexBody, MeasureError> {
    Ok(match body {
        ConvexBody::Ball(_) | ConvexBody::Cylinder(_) | ConvexBody::Facets(_) => body.clone(),
        other => ConvexBody::Facets(other.to_facet_form()?),
    })
}

/// The q-th dual curvature measure C̃_q(K, η).
///
/// Engine auto-selection: closed form for balls and cylinders, facet-exact
/// for polytope representations, sphere-mc as the universal (and only q ≤ 0)
/// fallback.
pub fn dual_curvature(
    body: &ConvexBody,
    eta: &NormalSelection,
    q: f64,
    cfg: &MeasureConfig,
) -> Result<MeasureEstimate, MeasureError> {
    match cfg.engine {
        EngineChoice::ClosedForm => closed_form_engine(body, eta, q, cfg),
        EngineChoice::SphereMc => sphere_engine(body, eta, q, cfg),
        EngineChoice::BodyMc => body_engine(body, eta, q, cfg),
        EngineChoice::FacetExact => {
            let p = body.to_facet_form()?;
            facet_engine(&p, eta, q, cfg)
        }
        EngineChoice::Auto => match body {
            ConvexBody::Ball(_) | ConvexBody::Cylinder(_) => closed_form_engine(body, eta, q, cfg),
            _ => {
                if q > 0.0 {
                    let p = body.to_facet_form()?;
                    facet_engine(&p, eta, q, cfg)
                } else {
                    sphere_engine(body, eta, q, cfg)
                }
            }
        },
    }
}

/// Cone-volume measure V_P(η): the q = n dual curvature measure, computed
/// exactly as Σ h_i·vol_{n−1}(F_i)/n over the selected facets.
pub fn cone_volume_measure(
    p: &FacetListedPolytope,
    eta: &NormalSelection,
) -> Result<MeasureEstimate, MeasureError> {
    let ids = resolve_selection(p, eta)?;
    let n = p.dim();
    let mut value = 0.0;
    for i in ids {
        let f = p.facet(i)?;
        value += f.offset * facet_area(f)? / n as f64;
    }
    Ok(MeasureEstimate {
        value,
        abs_error: 1e-12 * value,
        engine: EngineTag::FacetExact,
        q: n as f64,
        body: format!("facets(m={}, n={})", p.facets().len(), n),
        selection: eta.describe(),
        nodes_or_samples: 0,
    })
}

/// Volume of a facet-listed polytope via its origin cone decomposition.
pub fn polytope_volume(p: &FacetListedPolytope) -> Result<f64, MeasureError> {
    Ok(cone_volume_measure(p, &NormalSelection::FullSphere)?.value)
}

/// Volume via signed cones from an arbitrary apex: Σ (h_i − ⟨u_i,a⟩)·A_i/n.
/// An algebraically independent route for cross-checking the origin cones.
pub fn polytope_volume_from_apex(
    p: &FacetListedPolytope,
    apex: &[f64],
) -> Result<f64, MeasureError> {
    let n = p.dim();
    let mut vol = 0.0;
    for f in p.facets() {
        let height = f.offset - linalg::dot(&f.normal, apex);
        vol += height * facet_area(f)? / n as f64;
    }
    Ok(vol)
}

/// Dual quermassintegral W̃_{n−i}(K) = C̃_i(K, S^{n−1}).
pub fn dual_quermassintegral(
    body: &ConvexBody,
    i: usize,
    cfg: &MeasureConfig,
) -> Result<MeasureEstimate, MeasureError> {
    let n = body.dim();
    if i > n {
        return Err(MeasureError::InvalidParameter(format!(
            "order i must satisfy 0 ≤ i ≤ n = {n}, got {i}"
        )));
    }
    let q = i as f64;
    // The ball identity ω_n·r^q covers q = 0; every other body needs the
    // sphere engine there.
    let cfg = if i == 0 && !matches!(body, ConvexBody::Ball(_)) && cfg.engine == EngineChoice::Auto
    {
        cfg.with_engine(EngineChoice::SphereMc)
    } else {
        *cfg
    };
    dual_curvature(body, &NormalSelection::FullSphere, q, &cfg)
}

/// Structural parallelotope test: exactly 2n facets whose normals form n
/// linearly independent ± pairs.
pub fn is_parallelotope(p: &FacetListedPolytope) -> bool {
    let n = p.dim();
    if p.facets().len() != 2 * n {
        return false;
    }
    let mut reps: Vec<Vec<f64>> = Vec::new();
    for f in p.facets() {
        let neg = linalg::scale(&f.normal, -1.0);
        if !reps
            .iter()
            .any(|r| linalg::dist(r, &f.normal) <= 1e-9 || linalg::dist(r, &neg) <= 1e-9)
        {
            reps.push(f.normal.to_vec());
        }
    }
    reps.len() == n && linalg::rank(&reps, 1e-9) == n
}

/// Applicable bound for the concentration ratio of (n, dim L, q).
pub fn bound_for(n: usize, dim_l: usize, q: f64, parallelotope: bool) -> (BoundKind, Option<f64>) {
    let k = dim_l as f64;
    let nf = n as f64;
    if n == 2 && q > 2.0 {
        (BoundKind::Planar, Some((q - 1.0) / q))
    } else if q >= nf + 1.0 {
        (BoundKind::QAtLeastNPlusOne, Some((q - nf + k) / q))
    } else if q == nf {
        (BoundKind::ConeVolume, Some(k / nf))
    } else if q > 0.0 && q < nf {
        (BoundKind::Subcritical, Some((k / q).min(1.0)))
    } else if parallelotope && q > nf {
        (BoundKind::Parallelotope, Some((q - nf + k) / q))
    } else {
        (BoundKind::None, None)
    }
}

/// Subspace concentration ratio C̃_q(K, S∩L)/C̃_q(K, S^{n−1}) with the bound
/// from the q-table. Numerator and denominator always share the engine (and
/// the sample stream, for the Monte Carlo engines) to cancel systematic
/// bias.
pub fn subspace_concentration_ratio(
    body: &ConvexBody,
    l: &Subspace,
    q: f64,
    cfg: &MeasureConfig,
) -> Result<RatioReport, MeasureError> {
    if l.ambient_dim() != body.dim() {
        return Err(MeasureError::InvalidSelection(format!(
            "subspace lives in ℝ^{} but the body in ℝ^{}",
            l.ambient_dim(),
            body.dim()
        )));
    }
    let eta = NormalSelection::SubspaceCap(l.clone());
    let num = dual_curvature(body, &eta, q, cfg)?;
    let den = dual_curvature(body, &NormalSelection::FullSphere, q, cfg)?;
    if !(den.value > 0.0) {
        return Err(MeasureError::DegenerateTotal);
    }
    let ratio = num.value / den.value;
    let ratio_err = (num.abs_error + ratio.abs() * den.abs_error) / den.value;
    let parallelotope = match body {
        ConvexBody::Facets(p) => is_parallelotope(p),
        ConvexBody::AxisBox { .. } => true,
        ConvexBody::Ball(_) | ConvexBody::Cylinder(_) => false,
        other => other
            .to_facet_form()
            .map(|p| is_parallelotope(&p))
            .unwrap_or(false),
    };
    let (kind, bound) = bound_for(body.dim(), l.dim(), q, parallelotope);
    let (satisfied, margin) = match bound {
        Some(b) => (ratio <= b + 1e-9 + 3.0 * ratio_err, Some(b - ratio)),
        None => (true, None),
    };
    Ok(RatioReport {
        ratio,
        bound,
        bound_kind: kind,
        satisfied,
        margin,
        subspace_measure: num,
        total_measure: den,
        q,
        dim_l: l.dim(),
    })
}
