//! Gauss–Legendre rules on [0,1] and their tensor product on [0,1]².

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use super::{QuadEngine, QuadratureError, QuadratureResult};

/// Nodes and weights of the m-point Gauss–Legendre rule mapped to [0,1],
/// computed by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre_nodes(m: usize) -> (Vec<f64>, Vec<f64>) {
    let rule = cached_nodes(m);
    (rule.0.clone(), rule.1.clone())
}

type Rule = Rc<(Vec<f64>, Vec<f64>)>;

fn cached_nodes(m: usize) -> Rule {
    thread_local! {
        static CACHE: RefCell<HashMap<usize, Rule>> = RefCell::new(HashMap::new());
    }
    CACHE.with(|c| {
        c.borrow_mut()
            .entry(m)
            .or_insert_with(|| Rc::new(compute_nodes(m)))
            .clone()
    })
}

fn compute_nodes(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m {
        // Tricomi initial guess on (−1, 1).
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence: P₀ = 1, P₁ = x.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=m {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = 0.5 * (1.0 - x);
        weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    nodes.reverse();
    weights.reverse();
    (nodes, weights)
}

fn tensor_value<F: Fn(f64, f64) -> f64>(f: &F, m: usize) -> f64 {
    let rule = cached_nodes(m);
    let (nodes, weights) = (&rule.0, &rule.1);
    let mut sum = 0.0;
    for (si, wi) in nodes.iter().zip(weights) {
        let mut inner = 0.0;
        for (tj, wj) in nodes.iter().zip(weights) {
            inner += wj * f(*si, *tj);
        }
        sum += wi * inner;
    }
    sum
}

/// Tensor Gauss–Legendre integral of `f` over [0,1]² at `nodes_per_axis`
/// points per axis; the error estimate doubles the node count.
pub fn gauss_legendre_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    nodes_per_axis: usize,
) -> Result<QuadratureResult, QuadratureError> {
    if !(2..=200).contains(&nodes_per_axis) {
        return Err(QuadratureError::BadNodeCount(nodes_per_axis));
    }
    let value = tensor_value(&f, nodes_per_axis);
    let refined = tensor_value(&f, 2 * nodes_per_axis);
    Ok(QuadratureResult {
        value,
        abs_error: (value - refined).abs(),
        nodes_or_samples: (nodes_per_axis * nodes_per_axis + 4 * nodes_per_axis * nodes_per_axis)
            as u64,
        engine: QuadEngine::GaussLegendre,
    })
}

/// 1D Gauss–Legendre integral of `f` over [a,b] with a doubling error
/// estimate. Used by the segment moment engine.
pub fn gl_integrate_1d<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    nodes: usize,
) -> Result<QuadratureResult, QuadratureError> {
    if !(2..=200).contains(&nodes) {
        return Err(QuadratureError::BadNodeCount(nodes));
    }
    let span = b - a;
    let eval = |m: usize| -> f64 {
        let rule = cached_nodes(m);
        rule.0
            .iter()
            .zip(&rule.1)
            .map(|(&x, &w)| w * f(a + span * x))
            .sum::<f64>()
            * span
    };
    let value = eval(nodes);
    let refined = eval(2 * nodes);
    Ok(QuadratureResult {
        value,
        abs_error: (value - refined).abs(),
        nodes_or_samples: (3 * nodes) as u64,
        engine: QuadEngine::GaussLegendre,
    })
}
