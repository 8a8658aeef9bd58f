//! Caputo fractional directional derivatives of RBF kernels.
//!
//! For alpha in (1, 2) the derivative at a node is the weakly singular
//! integral of the second directional derivative along the back-ray of
//! length `z`; the affine map onto [-1, 1] turns it into a Gauss-Jacobi sum:
//!
//! `D = (z/2)^(2-alpha) / Gamma(2-alpha) * sum_s w_s * dir2(at shifted point)`
//!
//! At alpha = 2 the operator is the plain second directional derivative and
//! is dispatched directly (exact bitwise comparison); orders within 1e-8
//! below 2 are rejected because the `1/Gamma(2-alpha)` prefactor makes them
//! numerically meaningless.

use crate::error::{Error, Result};
use crate::geometry::{Direction, Domain, Point2};
use crate::nodes::NodeSet;
use crate::quadrature::JacobiRule;
use crate::rbf::Rbf;
use crate::special::gamma;

/// Orders in `(2 - ALPHA_GUARD, 2)` are refused.
pub const ALPHA_GUARD: f64 = 1e-8;

fn validate_alpha(alpha: f64, rule: &JacobiRule) -> Result<()> {
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(Error::InvalidParam(format!(
            "fractional order must lie in (1, 2], got {alpha}"
        )));
    }
    if alpha != 2.0 && alpha > 2.0 - ALPHA_GUARD {
        return Err(Error::InvalidParam(format!(
            "order {alpha} is too close to 2; use alpha = 2 exactly"
        )));
    }
    if rule.alpha() != alpha {
        return Err(Error::InvalidParam(format!(
            "quadrature rule was built for alpha = {}, got {alpha}",
            rule.alpha()
        )));
    }
    Ok(())
}

/// Caputo directional derivative of one kernel at one point, with the
/// boundary distance `z` supplied by the caller.
pub fn frac_dir_deriv(
    rbf: &Rbf,
    center: Point2,
    node: Point2,
    d: &Direction,
    alpha: f64,
    z: f64,
    rule: &JacobiRule,
) -> Result<f64> {
    validate_alpha(alpha, rule)?;
    if alpha == 2.0 {
        return Ok(rbf.dir2(center, node, d));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let ct = d.cos();
    let st = d.sin();
    let mut sum = 0.0;
    for (c, w) in rule.iter() {
        let step = z * (1.0 + c) * 0.5;
        let rx = node.x - ct * step - center.x;
        let ry = node.y - st * step - center.y;
        sum += w * rbf.dir2_at(rx, ry, ct, st);
    }
    Ok((z * 0.5).powf(2.0 - alpha) / gamma(2.0 - alpha) * sum)
}

/// Derivative of every kernel (one per node, centers = all nodes) at the
/// node with index `node_index`. The boundary distance is computed once per
/// (node, direction).
pub fn frac_deriv_vector(
    rbf: &Rbf,
    nodes: &NodeSet,
    node_index: usize,
    d: &Direction,
    alpha: f64,
    domain: &Domain,
    rule: &JacobiRule,
) -> Result<Vec<f64>> {
    validate_alpha(alpha, rule)?;
    if node_index >= nodes.len() {
        return Err(Error::InvalidParam(format!(
            "node index {node_index} out of range for {} nodes",
            nodes.len()
        )));
    }
    let node = nodes.point(node_index);
    let ct = d.cos();
    let st = d.sin();

    if alpha == 2.0 {
        return Ok(nodes
            .points()
            .iter()
            .map(|&center| rbf.dir2(center, node, d))
            .collect());
    }

    let z = domain.boundary_distance(node, d)?;
    if z == 0.0 {
        return Ok(vec![0.0; nodes.len()]);
    }

    // Quadrature evaluation points along the back-ray, shared by all centers.
    let shifted: Vec<(f64, f64)> = rule
        .points()
        .iter()
        .map(|&c| {
            let step = z * (1.0 + c) * 0.5;
            (node.x - ct * step, node.y - st * step)
        })
        .collect();
    let prefactor = (z * 0.5).powf(2.0 - alpha) / gamma(2.0 - alpha);

    Ok(nodes
        .points()
        .iter()
        .map(|center| {
            let mut sum = 0.0;
            for ((px, py), w) in shifted.iter().zip(rule.weights()) {
                sum += w * rbf.dir2_at(px - center.x, py - center.y, ct, st);
            }
            prefactor * sum
        })
        .collect())
}
