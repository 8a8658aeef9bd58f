//! Gauss-Jacobi quadrature for the weight `(1 - s)^0 (1 + s)^(1 - alpha)` on
//! [-1, 1], which absorbs the weakly singular kernel of the Caputo integral
//! after the affine transformation onto the reference interval.
//!
//! Nodes and weights come from the Golub-Welsch eigenproblem of the Jacobi
//! three-term recurrence. At `alpha = 2` the would-be exponent -1 is not
//! integrable; that order bypasses quadrature entirely elsewhere, so the
//! rule degenerates to Gauss-Legendre there by convention.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::linalg::symmetric_tridiagonal_eigen;

/// A Gauss-Jacobi rule tied to a fractional order `alpha` in (1, 2].
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiRule {
    alpha: f64,
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl JacobiRule {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Number of quadrature points.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
    }

    /// Zeroth moment of the weight function: `2^(2-alpha) / (2-alpha)` for
    /// alpha < 2 and 2 for the Legendre degenerate case.
    pub fn zeroth_moment(alpha: f64) -> f64 {
        if alpha == 2.0 {
            2.0
        } else {
            2f64.powf(2.0 - alpha) / (2.0 - alpha)
        }
    }
}

/// Builds the q-point Gauss-Jacobi rule for `(1 + s)^(1 - alpha)`, exact for
/// polynomials of degree <= 2q - 1 against that weight.
pub fn gauss_jacobi(alpha: f64, q: usize) -> Result<JacobiRule> {
    if !(alpha > 1.0 && alpha <= 2.0) || !alpha.is_finite() {
        return Err(Error::InvalidParam(format!(
            "fractional order must lie in (1, 2], got {alpha}"
        )));
    }
    if q < 1 {
        return Err(Error::InvalidParam(
            "quadrature point count must be >= 1".to_string(),
        ));
    }
    let beta = if alpha == 2.0 { 0.0 } else { 1.0 - alpha };

    // Three-term recurrence of the Jacobi polynomials P^(0, beta), in the
    // symmetrized (tridiagonal) form.
    let mut diag = Vec::with_capacity(q);
    let mut off = Vec::with_capacity(q.saturating_sub(1));
    diag.push(beta / (2.0 + beta));
    for k in 1..q {
        let kf = k as f64;
        let denom = 2.0 * kf + beta;
        diag.push(beta * beta / (denom * (denom + 2.0)));
        off.push(2.0 * kf * (kf + beta) / (denom * (denom * denom - 1.0).sqrt()));
    }

    let (nodes, first_components) = symmetric_tridiagonal_eigen(&diag, &off)?;
    let mu0 = JacobiRule::zeroth_moment(alpha);
    let weights: Vec<f64> = first_components.iter().map(|z| mu0 * z * z).collect();

    // Defensive invariant checks: strictly increasing interior nodes,
    // positive weights, zeroth moment reproduced.
    for w in nodes.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvalidParam(
                "quadrature nodes failed to separate".to_string(),
            ));
        }
    }
    if nodes.first().is_some_and(|&c| c <= -1.0) || nodes.last().is_some_and(|&c| c >= 1.0) {
        return Err(Error::InvalidParam(
            "quadrature nodes left (-1, 1)".to_string(),
        ));
    }
    let sum: f64 = weights.iter().sum();
    if weights.iter().any(|&w| w <= 0.0) || ((sum - mu0) / mu0).abs() > 1e-12 {
        return Err(Error::InvalidParam(
            "quadrature weights failed the zeroth-moment identity".to_string(),
        ));
    }

    Ok(JacobiRule {
        alpha,
        points: nodes,
        weights,
    })
}

type RuleCache = Mutex<HashMap<(u64, usize), Arc<JacobiRule>>>;

fn cache() -> &'static RuleCache {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Cached rule lookup; the same rule is reused for every node and center.
pub fn gauss_jacobi_cached(alpha: f64, q: usize) -> Result<Arc<JacobiRule>> {
    let key = (alpha.to_bits(), q);
    if let Some(rule) = cache().lock().expect("rule cache poisoned").get(&key) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(gauss_jacobi(alpha, q)?);
    cache()
        .lock()
        .expect("rule cache poisoned")
        .insert(key, Arc::clone(&rule));
    Ok(rule)
}
