//! Differential-quadrature weights: for each node `x_i`, the row vector
//! `w_i` such that `D u(x_i) ~ sum_j w_ij u(x_j)` for the Caputo directional
//! derivative of one fractional term.
//!
//! Inverse Multiquadric and Gaussian kernels collocate directly: the system
//! matrix is `B_kj = phi_k(x_j)` (symmetric, positive definite in exact
//! arithmetic). The Multiquadric is only conditionally positive definite, so
//! its system trades the first kernel equation for the constant constraint
//! `sum_j w_ij = 0`, with rows `phi_k - phi_0` for k >= 1.
//!
//! The coefficient matrix does not depend on the node `i`, so it is factored
//! once and reused across all M + 1 right-hand sides.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fracderiv::frac_deriv_vector;
use crate::geometry::{Direction, Domain};
use crate::linalg::{LuFactors, Mat};
use crate::nodes::NodeSet;
use crate::quadrature::JacobiRule;
use crate::rbf::{Rbf, RbfFamily};

/// Condition estimates above this threshold are flagged in the report (the
/// solve still proceeds; small shape parameters routinely live here).
pub const CONDITION_WARN_THRESHOLD: f64 = 1e12;

/// Dense DQ coefficient matrix for one fractional term.
#[derive(Debug, Clone)]
pub struct WeightMatrix {
    alpha: f64,
    theta: f64,
    entries: Mat,
}

impl WeightMatrix {
    /// Wraps a precomputed square coefficient matrix (used by tests and by
    /// callers that load dumped weights).
    pub fn from_parts(alpha: f64, theta: f64, entries: Mat) -> Result<Self> {
        if entries.rows() != entries.cols() {
            return Err(Error::DimensionMismatch(format!(
                "weight matrix must be square, got {}x{}",
                entries.rows(),
                entries.cols()
            )));
        }
        Ok(Self {
            alpha,
            theta,
            entries,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Number of nodes (matrix order), M + 1.
    pub fn order(&self) -> usize {
        self.entries.rows()
    }

    pub fn entries(&self) -> &Mat {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.entries.row(i)
    }

    /// Applies the weights: component i of the result is
    /// `sum_j w_ij samples[j]`.
    pub fn apply(&self, samples: &[f64]) -> Result<Vec<f64>> {
        if samples.len() != self.order() {
            return Err(Error::DimensionMismatch(format!(
                "{} samples for {} weights",
                samples.len(),
                self.order()
            )));
        }
        Ok(self.entries.matvec(samples))
    }

    /// Largest absolute row sum deviation from zero, the Multiquadric
    /// constant-annihilation diagnostic.
    pub fn max_abs_row_sum(&self) -> f64 {
        (0..self.order())
            .map(|i| self.row(i).iter().sum::<f64>().abs())
            .fold(0.0, f64::max)
    }

    /// Writes the dense weight dump: header `i,j,weight`, one row per entry.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(f, "i,j,weight")?;
        for i in 0..self.order() {
            for (j, w) in self.row(i).iter().enumerate() {
                writeln!(f, "{i},{j},{w:.16e}")?;
            }
        }
        Ok(())
    }
}

/// Diagnostics from one weight solve.
#[derive(Debug, Clone, Copy)]
pub struct CollocationReport {
    /// 1-norm condition estimate of the collocation matrix.
    pub condition_estimate: f64,
    /// Largest residual of the solved collocation equations, relative to the
    /// magnitude of the fractional-derivative right-hand sides.
    pub max_residual: f64,
}

impl CollocationReport {
    pub fn is_ill_conditioned(&self) -> bool {
        self.condition_estimate > CONDITION_WARN_THRESHOLD
    }
}

fn rhs_columns(
    rbf: &Rbf,
    nodes: &NodeSet,
    d: &Direction,
    alpha: f64,
    domain: &Domain,
    rule: &JacobiRule,
) -> Result<Vec<Vec<f64>>> {
    (0..nodes.len())
        .into_par_iter()
        .map(|i| frac_deriv_vector(rbf, nodes, i, d, alpha, domain, rule))
        .collect()
}

/// Solves the weight systems, reports the condition estimate, and measures
/// the residual of the equations actually solved.
fn solve_and_report(
    system: &Mat,
    rhs: &[Vec<f64>],
    alpha: f64,
    theta: f64,
) -> Result<(WeightMatrix, CollocationReport)> {
    let n = system.rows();
    let lu = LuFactors::factor(system)?;
    let rows: Vec<Vec<f64>> = rhs
        .par_iter()
        .map(|b| lu.solve(b))
        .collect::<Result<Vec<_>>>()?;
    let entries = Mat::from_rows(&rows)?;

    let scale = rhs
        .iter()
        .flat_map(|col| col.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let max_residual = (0..n)
        .into_par_iter()
        .map(|i| {
            let w = entries.row(i);
            let mut worst = 0.0f64;
            for (srow, want) in system.row_iter().zip(&rhs[i]) {
                let lhs: f64 = srow.iter().zip(w).map(|(a, x)| a * x).sum();
                worst = worst.max((lhs - want).abs());
            }
            worst
        })
        .reduce(|| 0.0, f64::max)
        / scale;

    let report = CollocationReport {
        condition_estimate: lu.condition_estimate_1norm(),
        max_residual,
    };
    Ok((
        WeightMatrix {
            alpha,
            theta,
            entries,
        },
        report,
    ))
}

/// DQ weights for the strictly positive definite kernels (Inverse
/// Multiquadric and Gaussian): solves `B w_i = D phi(x_i)` with
/// `B_kj = phi_k(x_j)`.
pub fn weights_imq_ga(
    rbf: &Rbf,
    nodes: &NodeSet,
    d: &Direction,
    alpha: f64,
    domain: &Domain,
    rule: &JacobiRule,
) -> Result<(WeightMatrix, CollocationReport)> {
    if rbf.family() == RbfFamily::Multiquadric {
        return Err(Error::InvalidParam(
            "Multiquadric weights need the constant-augmented system; use weights_mq".to_string(),
        ));
    }
    let n = nodes.len();
    if n < 2 {
        return Err(Error::InvalidParam(
            "weight systems need at least 2 nodes".to_string(),
        ));
    }
    let pts = nodes.points();
    let system = Mat::from_fn(n, n, |k, j| rbf.eval(pts[k], pts[j]));
    let rhs = rhs_columns(rbf, nodes, d, alpha, domain, rule)?;
    solve_and_report(&system, &rhs, alpha, d.theta())
}

/// DQ weights for the Multiquadric kernel with the constant augmentation:
/// the first equation enforces `sum_j w_ij = 0`, the rest collocate the
/// differences `phi_k - phi_0`.
pub fn weights_mq(
    nodes: &NodeSet,
    d: &Direction,
    alpha: f64,
    epsilon: f64,
    domain: &Domain,
    rule: &JacobiRule,
) -> Result<(WeightMatrix, CollocationReport)> {
    let n = nodes.len();
    if n < 2 {
        return Err(Error::InvalidParam(
            "weight systems need at least 2 nodes".to_string(),
        ));
    }
    let rbf = Rbf::new(RbfFamily::Multiquadric, epsilon)?;
    let pts = nodes.points();
    let system = Mat::from_fn(n, n, |k, j| {
        if k == 0 {
            1.0
        } else {
            rbf.eval(pts[k], pts[j]) - rbf.eval(pts[0], pts[j])
        }
    });
    let raw = rhs_columns(&rbf, nodes, d, alpha, domain, rule)?;
    let rhs: Vec<Vec<f64>> = raw
        .into_iter()
        .map(|col| {
            let d0 = col[0];
            let mut out = vec![0.0; n];
            for (k, v) in col.into_iter().enumerate().skip(1) {
                out[k] = v - d0;
            }
            out
        })
        .collect();
    solve_and_report(&system, &rhs, alpha, d.theta())
}

/// Dispatches on the kernel family.
pub fn compute_weights(
    rbf: &Rbf,
    nodes: &NodeSet,
    d: &Direction,
    alpha: f64,
    domain: &Domain,
    rule: &JacobiRule,
) -> Result<(WeightMatrix, CollocationReport)> {
    match rbf.family() {
        RbfFamily::Multiquadric => weights_mq(nodes, d, alpha, rbf.epsilon(), domain, rule),
        _ => weights_imq_ga(rbf, nodes, d, alpha, domain, rule),
    }
}
