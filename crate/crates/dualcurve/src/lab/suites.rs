//! Named verification suites. Every suite returns a [`FuzzSummary`]; a
//! violation is only recorded after the candidate has been re-evaluated at
//! refined precision (10× samples, higher quadrature degree).

use rand::Rng;

use crate::geometry::{ConvexBody, Hull, SymVPolytope};
use crate::linalg::{self, Vector};
use crate::measures::{subspace_concentration_ratio, MeasureConfig};
use crate::quadrature::RngSeed;

use super::concentration::{
    brunn_minkowski_spot_check, cylinder_asymptotics_check, geomspace, prism_bound_check,
};
use super::moment_bm::{
    anderson_translate_check, moment_bm_check, reflection_corollary_check, small_p_ratio,
};
use super::random::{
    random_equal_area_polygon_pair, random_subspace, random_subspace_aligned,
    random_symmetric_polygon, random_symmetric_polytope,
};
use super::scalar::{karamata_check, scalar_combination_check, ConvexFn};
use super::{EqualityCase, FuzzConfig, FuzzSummary, LabError, Violation};

const SUITES: &[&str] = &[
    "karamata",
    "scalar-lemma",
    "alesker",
    "moment-bm",
    "corollary",
    "small-p",
    "anderson",
    "prism",
    "parallelotope",
    "planar",
    "subspace",
    "cylinder",
    "bm",
];

pub fn suite_names() -> &'static [&'static str] {
    SUITES
}

fn draw_in(rng: &mut rand_chacha::ChaCha8Rng, range: (f64, f64)) -> f64 {
    use rand::Rng;
    range.0 + (range.1 - range.0) * rng.random::<f64>()
}

/// Runs one named suite. `trials` scales the randomized part of each suite;
/// deterministic sub-checks always run.
pub fn run_suite(
    name: &str,
    trials: u64,
    seed: RngSeed,
    cfg: &MeasureConfig,
) -> Result<FuzzSummary, LabError> {
    match name {
        "karamata" => karamata_suite(trials, seed),
        "scalar-lemma" => scalar_lemma_suite(trials, seed),
        "alesker" => alesker_suite(trials, seed),
        "moment-bm" => moment_bm_suite(trials, seed, cfg),
        "corollary" => corollary_suite(trials, seed, cfg),
        "small-p" => small_p_suite(trials),
        "anderson" => anderson_suite(trials, seed, cfg),
        "prism" => prism_suite(trials, seed, cfg),
        "parallelotope" => parallelotope_suite(trials, seed, cfg),
        "planar" => planar_suite(trials, seed, cfg),
        "subspace" => subspace_suite(trials, seed, cfg),
        "cylinder" => cylinder_suite(cfg),
        "bm" => bm_suite(trials, seed, cfg),
        other => Err(LabError::UnknownSuite(other.to_string())),
    }
}

/// Runs every suite with its default trial budget scaled by `scale` (1.0
/// reproduces the acceptance budgets).
pub fn run_all_suites(
    scale: f64,
    seed: RngSeed,
    cfg: &MeasureConfig,
) -> Result<Vec<FuzzSummary>, LabError> {
    let budget = |base: u64| ((base as f64 * scale).round() as u64).max(1);
    let mut out = Vec::new();
    for (name, base) in [
        ("karamata", 10_000),
        ("scalar-lemma", 100_000),
        ("alesker", 20),
        ("moment-bm", 10_000),
        ("corollary", 2_000),
        ("small-p", 40),
        ("anderson", 2_000),
        ("prism", 1_000),
        ("parallelotope", 10_000),
        ("planar", 10_000),
        ("subspace", 10_000),
        ("cylinder", 13),
        ("bm", 30),
    ] {
        out.push(run_suite(name, budget(base), seed, cfg)?);
    }
    Ok(out)
}

fn karamata_suite(trials: u64, seed: RngSeed) -> Result<FuzzSummary, LabError> {
    let mut summary = FuzzSummary::new("karamata");
    summary.trials = trials;
    for t in 0..trials {
        let trial_seed = seed.for_trial(t);
        let mut rng = trial_seed.rng();
        let k = rng.random_range(2..=6);
        let mut ys: Vec<f64> = (0..k).map(|_| 3.0 * rng.random::<f64>()).collect();
        ys.sort_by(|a, b| b.total_cmp(a));
        // Reverse Robin Hood transfers: moving mass from a smaller to a
        // larger entry majorizes the original vector.
        let mut xs = ys.clone();
        for _ in 0..rng.random_range(1..=3) {
            let i = rng.random_range(0..k);
            let j = rng.random_range(0..k);
            let (hi, lo) = if xs[i] >= xs[j] { (i, j) } else { (j, i) };
            if hi == lo {
                continue;
            }
            let delta = rng.random::<f64>() * xs[lo];
            xs[hi] += delta;
            xs[lo] -= delta;
        }
        xs.sort_by(|a, b| b.total_cmp(a));
        let f = match rng.random_range(0..3) {
            0 => ConvexFn::Power(1.0 + 4.0 * rng.random::<f64>()),
            1 => ConvexFn::Exp,
            _ => {
                let mut slope = rng.random::<f64>();
                let mut value = 0.0;
                let mut pts = vec![(0.0, 0.0)];
                for i in 1..=4 {
                    value += slope;
                    pts.push((i as f64, value));
                    slope += rng.random::<f64>();
                }
                ConvexFn::Table(pts)
            }
        };
        match karamata_check(&xs, &ys, &f) {
            Ok(report) => {
                summary.record_margin(report.margin);
                if !report.holds {
                    summary.violations.push(Violation {
                        trial: t,
                        description: format!("karamata failed: xs={xs:?} ys={ys:?}"),
                        margin: report.margin,
                        seed: trial_seed,
                    });
                }
            }
            Err(e) => summary.notes.push(format!("trial {t}: {e}")),
        }
    }
    Ok(summary)
}

fn scalar_lemma_suite(trials: u64, seed: RngSeed) -> Result<FuzzSummary, LabError> {
    let mut summary = FuzzSummary::new("scalar-lemma");
    summary.trials = trials;
    for t in 0..trials {
        let trial_seed = seed.for_trial(t);
        let mut rng = trial_seed.rng();
        let z = 10.0 * rng.random::<f64>() - 5.0;
        let z_bar = 10.0 * rng.random::<f64>() - 5.0;
        let lambda = rng.random::<f64>();
        let p = 1.0 + 4.0 * rng.random::<f64>();
        let report = scalar_combination_check(z, z_bar, lambda, p)?;
        summary.record_margin(report.margin);
        if !report.holds {
            summary.violations.push(Violation {
                trial: t,
                description: format!("scalar lemma failed: z={z} z̄={z_bar} λ={lambda} p={p}"),
                margin: report.margin,
                seed: trial_seed,
            });
        }
    }

    // Constructed equality cases: the classifier must agree with numeric
    // equality to 1e−10 relative.
    let eq_cases = 1_000.min(trials.max(1));
    let mut worst_eq: f64 = 0.0;
    for t in 0..eq_cases {
        let trial_seed = seed.for_trial(trials + t);
        let mut rng = trial_seed.rng();
        let kind = t % 3;
        let (z, z_bar, lambda, p) = match kind {
            0 => (
                10.0 * rng.random::<f64>() - 5.0,
                10.0 * rng.random::<f64>() - 5.0,
                f64::from(rng.random::<bool>()),
                1.0 + 4.0 * rng.random::<f64>(),
            ),
            1 => {
                let z = 10.0 * rng.random::<f64>() - 5.0;
                (z, -z, rng.random::<f64>(), 1.0 + 4.0 * rng.random::<f64>())
            }
            _ => {
                let z = 1.0 + 4.0 * rng.random::<f64>();
                let z_bar = -(1.0 + 4.0 * rng.random::<f64>());
                let threshold = z.abs().max(z_bar.abs()) / (z.abs() + z_bar.abs());
                let lambda = threshold + (1.0 - threshold) * rng.random::<f64>();
                (z, z_bar, lambda, 1.0)
            }
        };
        let report = scalar_combination_check(z, z_bar, lambda, p)?;
        let rel = report.margin.abs() / report.scale.max(1e-300);
        worst_eq = worst_eq.max(rel);
        if report.equality_case == EqualityCase::None || rel > 1e-10 {
            summary.violations.push(Violation {
                trial: trials + t,
                description: format!(
                    "equality classifier mismatch (kind {kind}): z={z} z̄={z_bar} λ={lambda} p={p} case {:?}",
                    report.equality_case
                ),
                margin: -rel,
                seed: trial_seed,
            });
        }
    }
    summary
        .notes
        .push(format!("worst relative equality residual: {worst_eq:.3e}"));
    Ok(summary)
}

fn alesker_suite(points: u64, seed: RngSeed) -> Result<FuzzSummary, LabError> {
    use super::alesker::alesker_constancy_check;
    let mut summary = FuzzSummary::new("alesker");
    summary.trials = points;
    let samples = 1_000_000;

    // n = 2, p = 2: closed form ∫_{S¹}⟨x,θ⟩² dθ = π|x|².
    let mut rng = seed.rng();
    let xs2: Vec<Vec<f64>> = (0..points.max(5))
        .map(|_| {
            let a = 2.0 * std::f64::consts::PI * rng.random::<f64>();
            let r = 0.5 + 2.0 * rng.random::<f64>();
            vec![r * a.cos(), r * a.sin()]
        })
        .collect();
    let rep = alesker_constancy_check(2, 2.0, &xs2, samples, seed.for_trial(1))?;
    let pi = std::f64::consts::PI;
    let pi_err = (rep.inv_c_estimate - pi).abs() / pi;
    summary.record_margin(0.005 - pi_err);
    if pi_err > 0.005 {
        summary.violations.push(Violation {
            trial: 0,
            description: format!(
                "1/c(2,2) estimate {} differs from π by {pi_err:.2e}",
                rep.inv_c_estimate
            ),
            margin: 0.005 - pi_err,
            seed,
        });
    }
    summary.notes.push(format!(
        "1/c(2,2) = {:.8} (π = {:.8})",
        rep.inv_c_estimate, pi
    ));

    for (i, (n, p)) in [(3usize, 1.5f64), (4, 2.5)].iter().enumerate() {
        let mut rng = seed.for_trial(10 + i as u64).rng();
        let xs: Vec<Vec<f64>> = (0..20)
            .map(|_| {
                let u = crate::quadrature::sphere_sample(&mut rng, *n);
                linalg::scale(&u, 0.5 + 2.0 * rng.random::<f64>())
            })
            .collect();
        let rep = alesker_constancy_check(*n, *p, &xs, samples, seed.for_trial(20 + i as u64))?;
        summary.record_margin(0.005 - rep.max_rel_spread);
        if rep.max_rel_spread > 0.005 {
            summary.violations.push(Violation {
                trial: 10 + i as u64,
                description: format!(
                    "spread {:.3e} exceeds 0.5% for (n,p)=({n},{p})",
                    rep.max_rel_spread
                ),
                margin: 0.005 - rep.max_rel_spread,
                seed,
            });
        }
        summary.notes.push(format!(
            "(n,p)=({n},{p}): spread {:.3e} at {samples} shared samples",
            rep.max_rel_spread
        ));
    }
    Ok(summary)
}

fn random_segment_pair_on_origin_line(rng: &mut rand_chacha::ChaCha8Rng, n: usize) -> (Hull, Hull) {
    let u = crate::quadrature::sphere_sample(rng, n);
    let len = 0.2 + 2.0 * rng.random::<f64>();
    let a0 = 4.0 * rng.random::<f64>() - 2.0;
    let a1 = 4.0 * rng.random::<f64>() - 2.0;
    let seg = |a: f64, flip: bool| -> Hull {
        let d = if flip { -1.0 } else { 1.0 };
        Hull::new(vec![
            Vector::from_unchecked(linalg::scale(&u, d * a)),
            Vector::from_unchecked(linalg::scale(&u, d * (a + len))),
        ])
        .expect("segment points valid")
    };
    (seg(a0, false), seg(a1, rng.random::<bool>()))
}

fn moment_bm_suite(
    trials: u64,
    seed: RngSeed,
    cfg: &MeasureConfig,
) -> Result<FuzzSummary, LabError> {
    // Bodies of intrinsic dimension 1..2 embedded in R^3; p in [1,4].
    let fuzz = FuzzConfig {
        trials,
        seed,
        dim_range: (1, 2),
        vertex_range: (4, 8),
        exponent_range: (1.0, 4.0),
        lambda_grid: vec![0.0, 0.25, 0.5, 0.75, 1.0],
    };
    fuzz.validate()?;
    let mut summary = FuzzSummary::new("moment-bm");
    summary.trials = fuzz.trials;
    for t in 0..fuzz.trials {
        let trial_seed = fuzz.seed.for_trial(t);
        let mut rng = trial_seed.rng();
        let p = draw_in(&mut rng, fuzz.exponent_range);
        let (k0, k1) = if t % 2 == 0 {
            let z0 = 2.0 * rng.random::<f64>() - 1.0;
            let z1 = 2.0 * rng.random::<f64>() - 1.0;
            let gens = rng.random_range(fuzz.vertex_range.0..=fuzz.vertex_range.1);
            random_equal_area_polygon_pair(&mut rng, gens, z0, z1)
        } else {
            random_segment_pair_on_origin_line(&mut rng, 3)
        };
        for &lambda in &fuzz.lambda_grid {
            match moment_bm_check(&k0, &k1, lambda, p, cfg) {
                Ok(report) => {
                    summary.record_margin(report.margin);
                    if !report.holds {
                        let refined = moment_bm_check(&k0, &k1, lambda, p, &cfg.refined())?;
                        if !refined.holds {
                            summary.violations.push(Violation {
                                trial: t,
                                description: format!(
                                    "moment BM failed at λ={lambda}, p={p}: lhs={} rhs={}",
                                    refined.lhs, refined.rhs
                                ),
                                margin: refined.margin,
                                seed: trial_seed,
                            });
                        }
                    }
                }
                Err(e) => summary.notes.push(format!("trial {t}: {e}")),
            }
        }
    }
    Ok(summary)
}

fn corollary_suite(
    trials: u64,
    seed: RngSeed,
    cfg: &MeasureConfig,
) -> Result<FuzzSummary, LabError> {
    let mut summary = FuzzSummary::new("corollary");
    summary.trials = trials;
    let lambda_grid = [0.0, 0.25, 0.5, 0.75, 1.0];
    for t in 0..trials {
        let trial_seed = seed.for_trial(t);
        let mut rng = trial_seed.rng();
        let p = 1.0 + 3.0 * rng.random::<f64>();
        let body: Hull = match t % 3 {
            0 => {
                // Random segment anywhere in ℝ³.
                let a: Vec<f64> = (0..3).map(|_| 4.0 * rng.random::<f64>() - 2.0).collect();
                let b: Vec<f64> = (0..3).map(|_| 4.0 * rng.random::<f64>() - 2.0).collect();
                Hull::from_coords(vec![a, b])?
            }
            1 => {
                // Segment on a line through the origin (p = 1 equality
                // candidates).
                let (k0, _) = random_segment_pair_on_origin_line(&mut rng, 3);
                k0
            }
            _ => {
                // Translated symmetric polygon.
                let gens = rng.random_range(4..=7);
                let poly = random_symmetric_polygon(&mut rng, gens);
                let shift = [
                    2.0 * rng.random::<f64>() - 1.0,
                    2.0 * rng.random::<f64>() - 1.0,
                ];
                Hull::from_coords(
                    poly.full_vertices()
                        .into_iter()
                        .map(|v| vec![v[0] + shift[0], v[1] + shift[1]])
                        .collect(),
                )?
            }
        };
        let p_eff = if t % 5 == 0 { 1.0 } else { p };
        for &lambda in &lambda_grid {
            match reflection_corollary_check(&body, lambda, p_eff, cfg) {
                Ok(report) => {
                    summary.record_margin(report.margin);
                    if !report.holds {
                        let refined =
                            reflection_corollary_check(&body, lambda, p_eff, &cfg.refined())?;
                        if !refined.holds {
                            summary.violations.push(Violation {
                                trial: t,
                                description: format!("corollary failed at λ={lambda}, p={p_eff}"),
                                margin: refined.margin,
                                seed: trial_seed,
                            });
                        }
                    }
                    if report.equality_case == EqualityCase::LambdaEndpoint
                        && !report.numerically_equal()
                    {
                        summary.violations.push(Violation {
                            trial: t,
                            description: "endpoint flagged but sides differ".into(),
                            margin: -report.margin.abs(),
                            seed: trial_seed,
                        });
                    }
                }
                Err(e) => summary.notes.push(format!("trial {t}: {e}")),
            }
        }
    }
    Ok(summary)
}

fn small_p_suite(scan_points: u64) -> Result<FuzzSummary, LabError> {
    let mut summary = FuzzSummary::new("small-p");
    summary.trials = scan_points;

    // Pinned example: ε = 0.01, p = 0.5 gives ratio 1.00405 ± 1e−5.
    let ratio = small_p_ratio(0.01, 0.5);
    let example_err = (ratio - 1.00405).abs();
    summary.record_margin(1e-5 - example_err);
    if example_err > 1e-5 {
        summary.violations.push(Violation {
            trial: 0,
            description: format!("ratio at (ε,p)=(0.01,0.5) is {ratio}, expected 1.00405±1e-5"),
            margin: 1e-5 - example_err,
            seed: RngSeed::new(0),
        });
    }

    // Existence scan: for every p ∈ {0.1,…,0.9} some ε ≤ 0.1 reverses the
    // inequality.
    let eps_grid = geomspace(1e-4, 0.1, scan_points.max(10) as usize);
    for i in 1..=9 {
        let p = i as f64 / 10.0;
        let best = eps_grid
            .iter()
            .map(|&eps| small_p_ratio(eps, p) - 1.0)
            .fold(f64::NEG_INFINITY, f64::max);
        summary.record_margin(best);
        if best <= 0.0 {
            summary.violations.push(Violation {
                trial: i,
                description: format!("no reversal found for p={p} with ε ≤ 0.1"),
                margin: best,
                seed: RngSeed::new(0),
            });
        }
    }

    // Sanity guard: no counterexample at p = 1.
    let worst_p1 = eps_grid
        .iter()
        .chain(&[0.5, 1.0, 10.0])
        .map(|&eps| small_p_ratio(eps, 1.0) - 1.0)
        .fold(f64::NEG_INFINITY, f64::max);
    if worst_p1 > 1e-12 {
        summary.violations.push(Violation {
            trial: 100,
            description: format!("reversal at p=1 should not exist; got excess {worst_p1:.3e}"),
            margin: -worst_p1,
            seed: RngSeed::new(0),
        });
    }
    summary.notes.push(format!(
        "large-ε behavior at p = 0.5: ratio(10) = {:.6}, ratio(ε→∞) → (p+1)/2^p = {:.6}",
        small_p_ratio(10.0, 0.5),
        1.5 / 2.0f64.sqrt()
    ));
    Ok(summary)
}

fn anderson_suite(
    trials: u64,
    seed: RngSeed,
    cfg: &MeasureConfig,
) -> Result<FuzzSummary, LabError> {
    let mut summary = FuzzSummary::new("anderson");
    summary.trials = trials;
    let lambda_grid = [0.0, 0.5, 1.0];
    for t in 0..trials {
        let trial_seed = seed.for_trial(t);
        let mut rng = trial_seed.rng();
        let p = 3.0 * rng.random::<f64>();
        let q: Hull = if t % 2 == 0 {
            let a = 0.2 + 1.8 * rng.random::<f64>();
            let u = crate::quadrature::sphere_sample(&mut rng, 2);
            Hull::new(vec![
                Vector::from_unchecked(linalg::scale(&u, a)),
                Vector::from_unchecked(linalg::scale(&u, -a)),
            ])?
        } else {
            let gens = rng.random_range(4..=7);
            random_symmetric_polygon(&mut rng, gens).to_hull()
        };
        let v: Vec<f64> = (0..2).map(|_| 4.0 * rng.random::<f64>() - 2.0).collect();
        for &lambda in &lambda_grid {
            match anderson_translate_check(&q, &v, lambda, p, cfg) {
                Ok(rep) => {
                    summary.record_margin(rep.inequality.margin);
                    if !rep.inequality.holds {
                        let refined = anderson_translate_check(&q, &v, lambda, p, &cfg.refined())?;
                        if !refined.inequality.holds {
                            summary.violations.push(Violation {
                                trial: t,
                                description: format!(
                                    "translate inequality failed at λ={lambda}, p={p}"
                                ),
                                margin: refined.inequality.margin,
                                seed: trial_seed,
                            });
                        }
                    }
                }
                Err(e) => summary.notes.push(format!("trial {t}: {e}")),
            }
        }
    }
    Ok(summary)
}

fn prism_suite(trials: u64, seed: RngSeed, cfg: &MeasureConfig) -> Result<FuzzSummary, LabError> {
    let mut summary = FuzzSummary::new("prism");
    summary.trials = trials;
    let n = 3usize;
    for t in 0..trials {
        let trial_seed = seed.for_trial(t);
        let mut rng = trial_seed.rng();
        let u = crate::quadrature::sphere_sample(&mut rng, n);
        // Orthonormal basis of u⊥ to host a symmetric polygon base.
        let frame: Vec<Vec<f64>> = {
            let mut vs = vec![u.clone()];
            for i in 0..n {
                vs.push(linalg::basis_vector(n, i));
            }
            linalg::orthonormalize(&vs, 1e-10)[1..].to_vec()
        };
        let gens = rng.random_range(3..=6);
        let poly = random_symmetric_polygon(&mut rng, gens);
        let base = Hull::new(
            poly.full_vertices()
                .into_iter()
                .map(|w| Vector::from_unchecked(linalg::lin_comb(w[0], &frame[0], w[1], &frame[1])))
                .collect(),
        )?;
        let height = 0.3 + 1.7 * rng.random::<f64>();
        let shear0 = rng.random::<f64>() - 0.5;
        let shear1 = rng.random::<f64>() - 0.5;
        let mut v = linalg::scale(&u, height);
        for (vi, (f0, f1)) in v.iter_mut().zip(frame[0].iter().zip(frame[1].iter())) {
            *vi += shear0 * f0 + shear1 * f1;
        }
        let q = n as f64 + 3.0 * rng.random::<f64>().max(1e-3);
        match prism_bound_check(&base, &v, q, cfg) {
            Ok(report) => {
                summary.record_margin(report.margin);
                if !report.holds {
                    let refined = prism_bound_check(&base, &v, q, &cfg.refined())?;
                    if !refined.holds {
                        summary.violations.push(Violation {
                            trial: t,
                            description: format!("prism bound failed at q={q}"),
                            margin: refined.margin,
                            seed: trial_seed,
                        });
                    }
                }
            }
            Err(e) => summary.notes.push(format!("trial {t}: {e}")),
        }
    }

    // Continuity scan towards q → n⁺ on a fixed prism: the margin approaches
    // the cone-volume (q = n) statement value.
    let base = Hull::from_coords(vec![
        vec![1.0, 1.0, 0.0],
        vec![1.0, -1.0, 0.0],
        vec![-1.0, -1.0, 0.0],
        vec![-1.0, 1.0, 0.0],
    ])?;
    let v = [0.3, 0.1, 1.0];
    let mut scan = Vec::new();
    for dq in [0.5, 0.25, 0.1, 0.01] {
        let r = prism_bound_check(&base, &v, n as f64 + dq, cfg)?;
        scan.push((dq, r.margin));
    }
    let prism_body = crate::geometry::prism(
        &base
            .points()
            .iter()
            .map(|w| Vector::from_unchecked(w.to_vec()))
            .collect::<Vec<_>>(),
        &Vector::from_unchecked(v.to_vec()),
    )?
    .build_facets()?;
    let tops: Vec<usize> = prism_body
        .facets()
        .iter()
        .enumerate()
        .filter(|(_, f)| f.normal[2].abs() > 1.0 - 1e-9)
        .map(|(i, _)| i)
        .collect();
    let cone_top = crate::measures::cone_volume_measure(
        &prism_body,
        &crate::geometry::NormalSelection::FacetSubset(tops),
    )?;
    let cone_total = crate::measures::cone_volume_measure(
        &prism_body,
        &crate::geometry::NormalSelection::FullSphere,
    )?;
    let limit_margin = cone_top.value - cone_total.value / n as f64;
    summary.notes.push(format!(
        "q→n⁺ margins {:?} approach the cone-volume margin {limit_margin:.6}",
        scan
    ));
    // The approach is roughly linear in q−n; judge the closest scan point
    // against the widest one.
    let (_, widest) = scan[0];
    let (_, last_margin) = scan[scan.len() - 1];
    if (last_margin - limit_margin).abs() > 0.05 * widest.abs().max(1e-9) {
        summary
            .notes
            .push("continuity scan deviates from the q = n margin".into());
    }
    Ok(summary)
}

fn parallelotope_suite(
    trials: u64,
    seed: RngSeed,
    cfg: &MeasureConfig,
) -> Result<FuzzSummary, LabError> {
    let mut summary = FuzzSummary::new("parallelotope");
    summary.trials = trials;
    let n = 3usize;
    for t in 0..trials {
        let trial_seed = seed.for_trial(t);
        let mut rng = trial_seed.rng();
        let a = loop {
            let cand: Vec<Vec<f64>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| 2.0 * rng.random::<f64>() - 1.0)
                        .collect::<Vec<f64>>()
                })
                .collect();
            if linalg::det(&cand).abs() > 0.1 {
                break cand;
            }
        };
        // Half the trials exercise the open band (n, n+1).
        let q = if t % 2 == 0 {
            n as f64 + rng.random::<f64>().max(1e-3)
        } else {
            n as f64 + 1.0 + 3.0 * rng.random::<f64>()
        };
        let p = crate::geometry::parallelotope(&a)?.build_facets()?;
        let k = rng.random_range(1..n);
        let l = if rng.random::<bool>() {
            random_subspace_aligned(&mut rng, &p, k)
        } else {
            random_subspace(&mut rng, n, k)
        };
        let body = ConvexBody::Facets(p);
        ratio_fuzz_common(&mut summary, &body, &l, q, t, trial_seed, cfg)?;
    }
    Ok(summary)
}

fn ratio_fuzz_common(
    summary: &mut FuzzSummary,
    body: &ConvexBody,
    l: &crate::geometry::Subspace,
    q: f64,
    t: u64,
    trial_seed: RngSeed,
    cfg: &MeasureConfig,
) -> Result<Option<f64>, LabError> {
    let first = match subspace_concentration_ratio(body, l, q, cfg) {
        // A sliver body can defeat the default-degree rule outright; retry
        // once at refined budgets, then through the sphere engine, whose
        // integrand ρ^q has no singularity.
        Err(crate::measures::MeasureError::DegenerateTotal) => {
            match subspace_concentration_ratio(body, l, q, &cfg.refined()) {
                Err(crate::measures::MeasureError::DegenerateTotal) => {
                    let mc = cfg
                        .refined()
                        .with_engine(crate::measures::EngineChoice::SphereMc);
                    subspace_concentration_ratio(body, l, q, &mc)
                }
                other => other,
            }
        }
        other => other,
    };
    match first {
        Ok(mut report) => {
            // A negative margin that survived only thanks to a wide error
            // bar is re-measured at refined budgets, so the summary reports
            // best-effort margins and violations are judged tightly.
            if !report.satisfied || report.margin.is_some_and(|m| m < 0.0) {
                if let Ok(refined) = subspace_concentration_ratio(body, l, q, &cfg.refined()) {
                    report = refined;
                }
            }
            summary.record_margin(report.margin.unwrap_or(f64::INFINITY));
            if !report.satisfied {
                summary.violations.push(Violation {
                    trial: t,
                    description: format!(
                        "bound {:?} failed: q={q}, dim L={}, ratio={}",
                        report.bound_kind,
                        l.dim(),
                        report.ratio
                    ),
                    margin: report.margin.unwrap_or(f64::NAN),
                    seed: trial_seed,
                });
            }
            Ok(Some(report.ratio))
        }
        Err(e) => {
            summary.notes.push(format!("trial {t}: {e}"));
            Ok(None)
        }
    }
}

fn planar_suite(trials: u64, seed: RngSeed, cfg: &MeasureConfig) -> Result<FuzzSummary, LabError> {
    // Symmetric polygons, q in (2, 6].
    let fuzz = FuzzConfig {
        trials,
        seed,
        dim_range: (2, 2),
        vertex_range: (3, 8),
        exponent_range: (2.0, 6.0),
        lambda_grid: vec![0.0],
    };
    fuzz.validate()?;
    let mut summary = FuzzSummary::new("planar");
    summary.trials = fuzz.trials;
    summary.histogram = vec![0; 10];
    for t in 0..fuzz.trials {
        let trial_seed = fuzz.seed.for_trial(t);
        let mut rng = trial_seed.rng();
        let gens = rng.random_range(fuzz.vertex_range.0..=fuzz.vertex_range.1);
        let poly = random_symmetric_polygon(&mut rng, gens);
        let p = poly.build_facets()?;
        let q = fuzz.exponent_range.0
            + (fuzz.exponent_range.1 - fuzz.exponent_range.0) * rng.random::<f64>().max(1e-6);
        let l = if rng.random::<bool>() {
            random_subspace_aligned(&mut rng, &p, 1)
        } else {
            random_subspace(&mut rng, 2, 1)
        };
        let body = ConvexBody::Facets(p);
        if let Some(ratio) = ratio_fuzz_common(&mut summary, &body, &l, q, t, trial_seed, cfg)? {
            let bin = ((ratio * 10.0) as usize).min(9);
            summary.histogram[bin] += 1;
        }
    }

    // Deterministic corner cases: the square and a thin rectangle.
    let square = ConvexBody::axis_box(vec![1.0, 1.0])?;
    let l = crate::geometry::Subspace::coordinate(2, &[0])?;
    for q in [2.5, 3.0, 6.0] {
        let r = subspace_concentration_ratio(&square, &l, q, cfg)?;
        summary.record_margin(r.margin.unwrap_or(f64::INFINITY));
        if !r.satisfied {
            summary.violations.push(Violation {
                trial: trials,
                description: format!("square failed planar bound at q={q}"),
                margin: r.margin.unwrap_or(f64::NAN),
                seed,
            });
        }
    }
    let thin = ConvexBody::axis_box(vec![1.0, 0.01])?;
    let l2 = crate::geometry::Subspace::coordinate(2, &[1])?;
    let r = subspace_concentration_ratio(&thin, &l2, 3.0, cfg)?;
    summary.notes.push(format!(
        "thin rectangle [−1,1]×[−0.01,0.01], L = span(e₂), q = 3: ratio {:.6} < 2/3",
        r.ratio
    ));
    if !r.satisfied {
        summary.violations.push(Violation {
            trial: trials + 1,
            description: "thin rectangle failed planar bound".into(),
            margin: r.margin.unwrap_or(f64::NAN),
            seed,
        });
    }
    Ok(summary)
}

fn subspace_suite(
    trials: u64,
    seed: RngSeed,
    cfg: &MeasureConfig,
) -> Result<FuzzSummary, LabError> {
    // n in {3,4}; the exponent range is the offset of q above n for the
    // main branch, i.e. q in [n+1, n+4].
    let fuzz = FuzzConfig {
        trials,
        seed,
        dim_range: (3, 4),
        vertex_range: (4, 8),
        exponent_range: (1.0, 4.0),
        lambda_grid: vec![0.0],
    };
    fuzz.validate()?;
    let mut summary = FuzzSummary::new("subspace");
    summary.trials = fuzz.trials;
    for t in 0..fuzz.trials {
        let trial_seed = fuzz.seed.for_trial(t);
        let mut rng = trial_seed.rng();
        let n = if t % 2 == 0 {
            fuzz.dim_range.0
        } else {
            fuzz.dim_range.1
        };
        let gens = if n == 3 {
            rng.random_range(fuzz.vertex_range.0..=fuzz.vertex_range.1)
        } else {
            rng.random_range(fuzz.vertex_range.0..=fuzz.vertex_range.1.min(6))
        };
        let poly = random_symmetric_polytope(&mut rng, n, gens);
        let p = poly.build_facets()?;
        let k = rng.random_range(1..n);
        let l = if rng.random::<bool>() {
            random_subspace_aligned(&mut rng, &p, k)
        } else {
            random_subspace(&mut rng, n, k)
        };
        // Main branch q ≥ n+1; every fourth trial runs the 0 < q < n branch
        // on q ∈ [n−2, n), where the facet integrand |z|^{q−n} stays within
        // reach of the fixed-degree rule and min{dim L/q, 1} is nontrivial.
        let q = if t % 4 == 3 {
            n as f64 - 2.0 + 2.0 * 0.999 * rng.random::<f64>()
        } else {
            n as f64 + draw_in(&mut rng, fuzz.exponent_range)
        };
        let body = ConvexBody::Facets(p);
        ratio_fuzz_common(&mut summary, &body, &l, q, t, trial_seed, cfg)?;
    }

    // Deterministic anchors.
    let cross = ConvexBody::VPolytope(crate::geometry::cross_polytope(3));
    let l = crate::geometry::Subspace::coordinate(3, &[0])?;
    let r = subspace_concentration_ratio(&cross, &l, 4.0, cfg)?;
    if r.ratio != 0.0 {
        summary.violations.push(Violation {
            trial: trials,
            description: "cross-polytope span(e₁) cap should carry no mass".into(),
            margin: -r.ratio,
            seed,
        });
    }
    let cube = ConvexBody::axis_box(vec![1.0, 1.0, 1.0])?;
    let l12 = crate::geometry::Subspace::coordinate(3, &[0, 1])?;
    let r = subspace_concentration_ratio(&cube, &l12, 4.0, cfg)?;
    summary.record_margin(r.margin.unwrap_or(f64::INFINITY));
    if (r.ratio - 2.0 / 3.0).abs() > 1e-9 || !r.satisfied {
        summary.violations.push(Violation {
            trial: trials + 1,
            description: format!("cube span(e₁,e₂) q=4 ratio {} ≠ 2/3", r.ratio),
            margin: r.margin.unwrap_or(f64::NAN),
            seed,
        });
    }
    Ok(summary)
}

fn cylinder_suite(cfg: &MeasureConfig) -> Result<FuzzSummary, LabError> {
    let mut summary = FuzzSummary::new("cylinder");
    let grid = geomspace(1.0, 1000.0, 13);
    for (q, n, k) in [(4.0, 3usize, 1usize), (4.0, 3, 2), (5.5, 4, 2)] {
        let sweep = cylinder_asymptotics_check(q, n, k, &grid, cfg)?;
        summary.trials += grid.len() as u64;
        for row in &sweep.rows {
            summary.record_margin(row.margin);
        }
        if !sweep.all_below_limit {
            summary.violations.push(Violation {
                trial: 0,
                description: format!("ratio reached the limit for (q,n,k)=({q},{n},{k})"),
                margin: sweep
                    .rows
                    .iter()
                    .map(|r| r.margin)
                    .fold(f64::INFINITY, f64::min),
                seed: cfg.seed,
            });
        }
        if sweep.final_gap > 0.01 {
            summary.violations.push(Violation {
                trial: 0,
                description: format!(
                    "final gap {:.4} exceeds 0.01 for (q,n,k)=({q},{n},{k})",
                    sweep.final_gap
                ),
                margin: 0.01 - sweep.final_gap,
                seed: cfg.seed,
            });
        }
        if !sweep.monotone_nondecreasing {
            summary
                .notes
                .push(format!("non-monotone blip for (q,n,k)=({q},{n},{k})"));
        }
        summary.notes.push(format!(
            "(q,n,k)=({q},{n},{k}): ratio(10³) = {:.6}, limit {:.6}",
            sweep.rows.last().unwrap().ratio,
            sweep.limit
        ));
    }
    Ok(summary)
}

fn bm_suite(trials: u64, seed: RngSeed, cfg: &MeasureConfig) -> Result<FuzzSummary, LabError> {
    let mut summary = FuzzSummary::new("bm");
    summary.trials = trials;
    let samples = cfg.samples.clamp(10_000, 100_000);
    for t in 0..trials {
        let trial_seed = seed.for_trial(t);
        let mut rng = trial_seed.rng();
        let n = if t % 2 == 0 { 2 } else { 3 };
        let gens0 = rng.random_range(3..=6);
        let k0 = random_symmetric_polytope(&mut rng, n, gens0).to_hull();
        let k1 = if t % 3 == 0 {
            // Homothety equality case.
            k0.scale(0.5 + 2.0 * rng.random::<f64>())
        } else {
            let gens1 = rng.random_range(3..=6);
            random_symmetric_polytope(&mut rng, n, gens1).to_hull()
        };
        let lambda = rng.random::<f64>();
        match brunn_minkowski_spot_check(&k0, &k1, lambda, samples, trial_seed) {
            Ok(report) => {
                summary.record_margin(report.margin);
                if !report.holds {
                    summary.violations.push(Violation {
                        trial: t,
                        description: format!("Brunn–Minkowski spot check failed at λ={lambda}"),
                        margin: report.margin,
                        seed: trial_seed,
                    });
                }
            }
            Err(e) => summary.notes.push(format!("trial {t}: {e}")),
        }
    }

    // Strict case: cube vs cross-polytope at λ = 1/2.
    let cube = SymVPolytope::new(vec![
        Vector::from_slice(&[1.0, 1.0, 1.0]).unwrap(),
        Vector::from_slice(&[1.0, 1.0, -1.0]).unwrap(),
        Vector::from_slice(&[1.0, -1.0, 1.0]).unwrap(),
        Vector::from_slice(&[1.0, -1.0, -1.0]).unwrap(),
    ])?
    .to_hull();
    let cross = crate::geometry::cross_polytope(3).to_hull();
    let r = brunn_minkowski_spot_check(&cube, &cross, 0.5, 200_000, seed.for_trial(777))?;
    if !r.holds {
        summary.violations.push(Violation {
            trial: trials,
            description: "cube/cross-polytope spot check failed".into(),
            margin: r.margin,
            seed,
        });
    }
    if r.margin <= 0.0 {
        summary
            .notes
            .push("expected strict inequality for cube vs cross-polytope".into());
    }
    summary.record_margin(r.margin);
    Ok(summary)
}
