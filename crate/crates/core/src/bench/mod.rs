//! Benchmark harness: error norms, convergence rates, the shape-parameter
//! rule, runners for derivative-approximation and PDE cases, and the
//! catalog of reference problems (see [`catalog`]).

pub mod catalog;
pub mod report;

use std::sync::Arc;

use crate::dqweights::{compute_weights, WeightMatrix};
use crate::error::{Error, Result};
use crate::nodes::{chebyshev_1d, NodeSet};
use crate::quadrature::gauss_jacobi_cached;
use crate::rbf::{Rbf, RbfFamily};
use crate::stepper::{advance, SnapshotPolicy, SolveReport, TimeGrid};

pub use catalog::{by_name, CatalogCase, DerivativeCase, PdeCase};

/// Discrete error norms over all M + 1 nodes:
/// `e2 = sqrt(mean |u - U|^2)` and `einf = max |u - U|`.
pub fn error_norms(numeric: &[f64], exact: &[f64]) -> Result<(f64, f64)> {
    if numeric.len() != exact.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} numeric vs {} exact values",
            numeric.len(),
            exact.len()
        )));
    }
    if numeric.is_empty() {
        return Err(Error::InvalidParam("empty error vectors".to_string()));
    }
    let mut sum = 0.0;
    let mut max = 0.0f64;
    for (u, v) in numeric.iter().zip(exact) {
        let d = (u - v).abs();
        sum += d * d;
        max = max.max(d);
    }
    Ok(((sum / numeric.len() as f64).sqrt(), max))
}

/// Convergence rate between two runs: `d log2(e1/e2) / log2(M2/M1)` with `d`
/// the spatial dimension.
pub fn conv_rate(e1: f64, e2: f64, m1: usize, m2: usize, dim: usize) -> Result<f64> {
    if !(e1 > 0.0 && e2 > 0.0) {
        return Err(Error::InvalidParam(
            "convergence rate needs positive errors".to_string(),
        ));
    }
    if m1 == m2 {
        return Err(Error::InvalidParam(
            "convergence rate needs distinct nodal parameters".to_string(),
        ));
    }
    if !(dim == 1 || dim == 2) {
        return Err(Error::InvalidParam(format!("dimension must be 1 or 2, got {dim}")));
    }
    Ok(dim as f64 * (e1 / e2).log2() / (m2 as f64 / m1 as f64).log2())
}

/// Shape-parameter rule for 2D runs: `eps = c* / (M + 1)^0.25`.
pub fn shape_param(c_star: f64, m: usize) -> f64 {
    c_star / ((m + 1) as f64).powf(0.25)
}

/// Outcome of one PDE benchmark run.
pub struct PdeRunResult {
    pub e2: f64,
    pub einf: f64,
    pub epsilon: f64,
    pub solve: SolveReport,
    /// Worst condition estimate across the per-term weight solves and the
    /// Crank-Nicolson factorization.
    pub condition: f64,
    /// Worst collocation residual across the per-term weight solves.
    pub weight_residual: f64,
}

fn resolve_epsilon(
    case_name: &str,
    family: RbfFamily,
    m: usize,
    epsilon: Option<f64>,
) -> Result<f64> {
    epsilon
        .or_else(|| catalog::default_epsilon(case_name, family, m))
        .ok_or_else(|| {
            Error::InvalidParam(format!(
                "no default shape parameter for case '{case_name}' with {family} at M = {m}; pass one explicitly"
            ))
        })
}

/// Outcome of one derivative-approximation run.
pub struct DerivativeRunResult {
    pub e2: f64,
    pub einf: f64,
    pub epsilon: f64,
    pub report: crate::dqweights::CollocationReport,
}

/// Runs a derivative-approximation case on Chebyshev nodes: builds weights
/// for `(alpha, theta)`, applies them to samples of the target function, and
/// compares with the exact fractional derivative.
pub fn run_derivative_case(
    case: &DerivativeCase,
    family: RbfFamily,
    epsilon: Option<f64>,
    m: usize,
    q: usize,
) -> Result<(f64, f64)> {
    run_derivative_case_detailed(case, family, epsilon, m, q).map(|r| (r.e2, r.einf))
}

pub fn run_derivative_case_detailed(
    case: &DerivativeCase,
    family: RbfFamily,
    epsilon: Option<f64>,
    m: usize,
    q: usize,
) -> Result<DerivativeRunResult> {
    let epsilon = resolve_epsilon(&case.name, family, m, epsilon)?;
    let (a, b) = case.interval;
    let domain = crate::geometry::Domain::interval(a, b)?;
    let nodes = chebyshev_1d(a, b, m)?;
    let rule = gauss_jacobi_cached(case.alpha, q)?;
    let rbf = Rbf::new(family, epsilon)?;
    let (w, report) = compute_weights(&rbf, &nodes, &case.theta, case.alpha, &domain, &rule)?;
    let samples: Vec<f64> = nodes.points().iter().map(|p| (case.target)(p.x)).collect();
    let numeric = w.apply(&samples)?;
    let exact: Vec<f64> = nodes
        .points()
        .iter()
        .map(|p| (case.exact_deriv)(p.x))
        .collect();
    let (e2, einf) = error_norms(&numeric, &exact)?;
    Ok(DerivativeRunResult {
        e2,
        einf,
        epsilon,
        report,
    })
}

/// Assembles one weight matrix per fractional term of a PDE case.
pub fn assemble_term_weights(
    case: &PdeCase,
    rbf: &Rbf,
    nodes: &NodeSet,
    q: usize,
) -> Result<(Vec<WeightMatrix>, f64, f64)> {
    let mut weights = Vec::with_capacity(case.problem.terms.len());
    let mut cond = 0.0f64;
    let mut residual = 0.0f64;
    for term in &case.problem.terms {
        let rule = gauss_jacobi_cached(term.alpha, q)?;
        let (w, report) = compute_weights(
            rbf,
            nodes,
            &term.theta,
            term.alpha,
            &case.problem.domain,
            &rule,
        )?;
        cond = cond.max(report.condition_estimate);
        residual = residual.max(report.max_residual);
        weights.push(w);
    }
    Ok((weights, cond, residual))
}

/// Runs a PDE case to its horizon and measures the error at the final time.
pub fn run_pde_case(
    case: &PdeCase,
    family: RbfFamily,
    epsilon: Option<f64>,
    nodes: &NodeSet,
    n_steps: usize,
    q: usize,
) -> Result<PdeRunResult> {
    run_pde_case_with(case, family, epsilon, nodes, n_steps, q, SnapshotPolicy::FinalOnly)
}

pub fn run_pde_case_with(
    case: &PdeCase,
    family: RbfFamily,
    epsilon: Option<f64>,
    nodes: &NodeSet,
    n_steps: usize,
    q: usize,
    capture: SnapshotPolicy,
) -> Result<PdeRunResult> {
    let epsilon = resolve_epsilon(&case.name, family, nodes.m(), epsilon)?;
    let rbf = Rbf::new(family, epsilon)?;
    let (weights, weight_cond, weight_residual) = assemble_term_weights(case, &rbf, nodes, q)?;
    let grid = TimeGrid::new(case.problem.horizon, n_steps)?;
    let solve = advance(&case.problem, nodes, &weights, &grid, capture)?;
    let t_final = case.problem.horizon;
    let exact: Vec<f64> = nodes
        .points()
        .iter()
        .map(|p| (case.exact)(p.x, p.y, t_final))
        .collect();
    let (e2, einf) = error_norms(&solve.final_solution, &exact)?;
    let condition = weight_cond.max(solve.condition_estimate);
    Ok(PdeRunResult {
        e2,
        einf,
        epsilon,
        solve,
        condition,
        weight_residual,
    })
}

/// Exact nodal values of a case solution at a given time.
pub fn exact_on_nodes(exact: &crate::stepper::SpaceTimeFn, nodes: &NodeSet, t: f64) -> Vec<f64> {
    nodes
        .points()
        .iter()
        .map(|p| exact(p.x, p.y, t))
        .collect()
}

/// Helper for constructing function fields without repeating the Arc noise.
pub fn space_fn(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> crate::stepper::SpaceFn {
    Arc::new(f)
}

pub fn space_time_fn(
    f: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
) -> crate::stepper::SpaceTimeFn {
    Arc::new(f)
}
