//! Crank-Nicolson time stepping for the semi-discrete DQ system.
//!
//! With `K_l` the weight matrix of term `l` restricted to interior rows and
//! columns and `kappa_l` the diagonal of its diffusivity at the interior
//! nodes, each step solves
//!
//! `(I - tau/2 S) u^n = (I + tau/2 S) u^(n-1) + tau H^(n-1/2)`,
//! `S = sum_l kappa_l K_l`,
//!
//! where `H` collects the source sampled at `t_n - tau/2` and the boundary
//! columns `G_l = W_l(interior, boundary)` weighted by the averaged boundary
//! data of the two time levels. Boundary entries of the solution are
//! assigned from the boundary function, not solved.

use std::sync::Arc;
use std::time::Instant;

use crate::dqweights::WeightMatrix;
use crate::error::{Error, Result};
use crate::geometry::{Direction, Domain};
use crate::linalg::{LuFactors, Mat};
use crate::nodes::NodeSet;

pub type SpaceFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type SpaceTimeFn = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

/// One fractional term `kappa_l(x, y) * D^(alpha_l)_(theta_l)`.
#[derive(Clone)]
pub struct FractionalTerm {
    pub alpha: f64,
    pub theta: Direction,
    pub kappa: SpaceFn,
}

impl FractionalTerm {
    pub fn new(alpha: f64, theta: Direction, kappa: SpaceFn) -> Result<Self> {
        if !(alpha > 1.0 && alpha <= 2.0) {
            return Err(Error::InvalidParam(format!(
                "fractional order must lie in (1, 2], got {alpha}"
            )));
        }
        Ok(Self {
            alpha,
            theta,
            kappa,
        })
    }
}

impl std::fmt::Debug for FractionalTerm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FractionalTerm")
            .field("alpha", &self.alpha)
            .field("theta", &self.theta.theta())
            .finish_non_exhaustive()
    }
}

/// A complete initial-boundary-value problem.
#[derive(Clone)]
pub struct ProblemSpec {
    pub domain: Domain,
    pub terms: Vec<FractionalTerm>,
    pub source: SpaceTimeFn,
    pub initial: SpaceFn,
    pub boundary: SpaceTimeFn,
    pub horizon: f64,
}

impl ProblemSpec {
    pub fn validate(&self) -> Result<()> {
        if self.terms.is_empty() {
            return Err(Error::InvalidParam(
                "problem needs at least one fractional term".to_string(),
            ));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::InvalidParam(format!(
                "horizon must be positive, got {}",
                self.horizon
            )));
        }
        Ok(())
    }
}

/// Uniform time lattice `t_n = n tau` with `tau = T / N`.
#[derive(Debug, Clone, Copy)]
pub struct TimeGrid {
    n_steps: usize,
    tau: f64,
}

impl TimeGrid {
    pub fn new(horizon: f64, n_steps: usize) -> Result<Self> {
        if n_steps == 0 {
            return Err(Error::InvalidParam("need at least one time step".to_string()));
        }
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::InvalidParam(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        Ok(Self {
            n_steps,
            tau: horizon / n_steps as f64,
        })
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
}

/// Snapshot retention during [`advance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnapshotPolicy {
    /// Keep only the final state (default).
    FinalOnly,
    /// Keep every `stride`-th step (and the final one).
    Stride(usize),
}

/// Result of a time integration.
pub struct SolveReport {
    /// Solution over all M + 1 nodes at the final time.
    pub final_solution: Vec<f64>,
    /// Captured `(t, solution)` pairs per the snapshot policy.
    pub snapshots: Vec<(f64, Vec<f64>)>,
    /// Wall-clock seconds spent inside `advance`.
    pub wall_time: f64,
    /// Condition estimate of the factored Crank-Nicolson matrix.
    pub condition_estimate: f64,
}

/// The assembled Crank-Nicolson operators.
pub struct CnSystem {
    /// `I - tau/2 sum_l kappa_l K_l` over interior nodes.
    pub left: Mat,
    /// `I + tau/2 sum_l kappa_l K_l` over interior nodes.
    pub right: Mat,
    /// Unscaled boundary blocks `G_l = W_l(interior, boundary)`, one per term.
    pub boundary_blocks: Vec<Mat>,
    /// Diffusivities evaluated at interior nodes, one vector per term.
    pub kappa_interior: Vec<Vec<f64>>,
}

/// Builds the interior Crank-Nicolson matrices and boundary blocks from the
/// per-term weight matrices.
pub fn build_system(
    problem: &ProblemSpec,
    nodes: &NodeSet,
    weights: &[WeightMatrix],
    grid: &TimeGrid,
) -> Result<CnSystem> {
    problem.validate()?;
    if weights.len() != problem.terms.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} weight matrices for {} terms",
            weights.len(),
            problem.terms.len()
        )));
    }
    for (w, term) in weights.iter().zip(&problem.terms) {
        if w.order() != nodes.len() {
            return Err(Error::DimensionMismatch(format!(
                "weight matrix order {} for {} nodes",
                w.order(),
                nodes.len()
            )));
        }
        if w.alpha() != term.alpha || (w.theta() - term.theta.theta()).abs() > 1e-12 {
            return Err(Error::InvalidParam(format!(
                "weight matrix (alpha={}, theta={}) does not match term (alpha={}, theta={})",
                w.alpha(),
                w.theta(),
                term.alpha,
                term.theta.theta()
            )));
        }
    }

    let interior = nodes.interior_idx();
    let boundary = nodes.boundary_idx();
    let ni = interior.len();
    if ni == 0 {
        return Err(Error::InvalidParam(
            "node set has no interior points".to_string(),
        ));
    }

    let mut kappa_interior = Vec::with_capacity(problem.terms.len());
    let mut any_nonzero = false;
    for term in &problem.terms {
        let k: Vec<f64> = interior
            .iter()
            .map(|&i| {
                let p = nodes.point(i);
                (term.kappa)(p.x, p.y)
            })
            .collect();
        if let Some(bad) = k.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidParam(format!(
                "diffusivity must be finite and nonnegative at the nodes, got {bad}"
            )));
        }
        any_nonzero |= k.iter().any(|&v| v != 0.0);
        kappa_interior.push(k);
    }
    if !any_nonzero {
        return Err(Error::InvalidParam(
            "all diffusivities vanish at every interior node".to_string(),
        ));
    }

    // S = sum_l diag(kappa_l) K_l restricted to interior x interior.
    let mut s = Mat::zeros(ni, ni);
    for (w, kappa) in weights.iter().zip(&kappa_interior) {
        for (r, &i) in interior.iter().enumerate() {
            let row = w.row(i);
            let k = kappa[r];
            if k == 0.0 {
                continue;
            }
            let out = s.row_mut(r);
            for (c, &j) in interior.iter().enumerate() {
                out[c] += k * row[j];
            }
        }
    }
    let identity = Mat::identity(ni);
    let half_tau = 0.5 * grid.tau();
    let left = identity.scale_add(&s, -half_tau);
    let right = identity.scale_add(&s, half_tau);

    let boundary_blocks = weights
        .iter()
        .map(|w| {
            Mat::from_fn(ni, boundary.len(), |r, c| w.row(interior[r])[boundary[c]])
        })
        .collect();

    Ok(CnSystem {
        left,
        right,
        boundary_blocks,
        kappa_interior,
    })
}

/// Integrates the problem from the initial state to the horizon.
pub fn advance(
    problem: &ProblemSpec,
    nodes: &NodeSet,
    weights: &[WeightMatrix],
    grid: &TimeGrid,
    capture: SnapshotPolicy,
) -> Result<SolveReport> {
    let start = Instant::now();
    let system = build_system(problem, nodes, weights, grid)?;
    let interior = nodes.interior_idx();
    let boundary = nodes.boundary_idx();
    let ni = interior.len();
    let nb = boundary.len();
    let tau = grid.tau();

    let lu = LuFactors::factor(&system.left)?;
    let condition_estimate = lu.condition_estimate_1norm();

    // Combined boundary operator sum_l diag(kappa_l) G_l.
    let mut bg = Mat::zeros(ni, nb);
    for (g, kappa) in system.boundary_blocks.iter().zip(&system.kappa_interior) {
        for (r, &k) in kappa.iter().enumerate() {
            if k == 0.0 {
                continue;
            }
            for (dst, src) in bg.row_mut(r).iter_mut().zip(g.row(r)) {
                *dst += k * src;
            }
        }
    }

    let boundary_values = |t: f64| -> Vec<f64> {
        boundary
            .iter()
            .map(|&i| {
                let p = nodes.point(i);
                (problem.boundary)(p.x, p.y, t)
            })
            .collect()
    };

    let mut u: Vec<f64> = nodes
        .points()
        .iter()
        .map(|p| (problem.initial)(p.x, p.y))
        .collect();
    let mut u_int: Vec<f64> = interior.iter().map(|&i| u[i]).collect();
    let mut g_prev = boundary_values(0.0);
    let mut snapshots = Vec::new();

    for n in 1..=grid.n_steps() {
        let t_n = tau * n as f64;
        let g_now = boundary_values(t_n);

        let mut rhs = system.right.matvec(&u_int);
        for (r, &i) in interior.iter().enumerate() {
            let p = nodes.point(i);
            rhs[r] += tau * (problem.source)(p.x, p.y, t_n - 0.5 * tau);
        }
        // tau * 1/2 * sum_l kappa_l G_l (g^n + g^(n-1))
        for (out, row) in rhs.iter_mut().zip(bg.row_iter()) {
            let acc: f64 = row
                .iter()
                .zip(g_now.iter().zip(&g_prev))
                .map(|(w, (gn, gp))| w * (gn + gp))
                .sum();
            *out += 0.5 * tau * acc;
        }

        u_int = lu.solve(&rhs)?;
        for (r, &i) in interior.iter().enumerate() {
            u[i] = u_int[r];
        }
        for (c, &i) in boundary.iter().enumerate() {
            u[i] = g_now[c];
        }
        g_prev = g_now;

        if let SnapshotPolicy::Stride(k) = capture {
            if k > 0 && n % k == 0 && n != grid.n_steps() {
                snapshots.push((t_n, u.clone()));
            }
        }
    }

    let t_final = tau * grid.n_steps() as f64;
    snapshots.push((t_final, u.clone()));

    Ok(SolveReport {
        final_solution: u,
        snapshots,
        wall_time: start.elapsed().as_secs_f64(),
        condition_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dqweights::compute_weights;
    use crate::nodes::chebyshev_1d;
    use crate::quadrature::gauss_jacobi_cached;
    use crate::rbf::{Rbf, RbfFamily};
    use crate::special::gamma;
    use approx::assert_relative_eq;

    fn constant(v: f64) -> SpaceFn {
        Arc::new(move |_, _| v)
    }

    fn zero_problem(domain: Domain, alpha: f64, theta: f64) -> ProblemSpec {
        ProblemSpec {
            domain,
            terms: vec![FractionalTerm::new(alpha, Direction::new(theta), constant(1.0)).unwrap()],
            source: Arc::new(|_, _, _| 0.0),
            initial: Arc::new(|_, _| 0.0),
            boundary: Arc::new(|_, _, _| 0.0),
            horizon: 1.0,
        }
    }

    #[test]
    fn zero_data_is_a_fixed_point() {
        let domain = Domain::interval(0.0, 1.0).unwrap();
        let nodes = chebyshev_1d(0.0, 1.0, 10).unwrap();
        let alpha = 1.5;
        let problem = zero_problem(domain.clone(), alpha, 0.0);
        let rule = gauss_jacobi_cached(alpha, 50).unwrap();
        let rbf = Rbf::new(RbfFamily::Gaussian, 2.0).unwrap();
        let (w, _) = compute_weights(&rbf, &nodes, &Direction::new(0.0), alpha, &domain, &rule)
            .unwrap();
        let grid = TimeGrid::new(1.0, 10).unwrap();
        let report = advance(&problem, &nodes, &[w], &grid, SnapshotPolicy::FinalOnly).unwrap();
        for v in report.final_solution {
            assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn left_plus_right_is_twice_identity() {
        let domain = Domain::interval(0.0, 1.0).unwrap();
        let nodes = chebyshev_1d(0.0, 1.0, 9).unwrap();
        let alpha = 1.4;
        let problem = zero_problem(domain.clone(), alpha, 0.0);
        let rule = gauss_jacobi_cached(alpha, 50).unwrap();
        let rbf = Rbf::new(RbfFamily::InverseMultiquadric, 0.8).unwrap();
        let (w, _) = compute_weights(&rbf, &nodes, &Direction::new(0.0), alpha, &domain, &rule)
            .unwrap();
        let grid = TimeGrid::new(1.0, 7).unwrap();
        let sys = build_system(&problem, &nodes, &[w], &grid).unwrap();
        let ni = nodes.interior_idx().len();
        for i in 0..ni {
            for j in 0..ni {
                let sum = sys.left[(i, j)] + sys.right[(i, j)];
                if i == j {
                    // The tau/2 parts cancel algebraically; the two
                    // diagonal roundings of 1 -+ h leave at most ulp-level
                    // residue on the scale of h.
                    let h = (sys.right[(i, j)] - 1.0).abs().max(1.0);
                    assert!((sum - 2.0).abs() <= 4.0 * f64::EPSILON * h);
                } else {
                    assert_eq!(sum, 0.0);
                }
            }
        }
    }

    #[test]
    fn zero_weight_matrix_gives_identity_system() {
        // A vanishing spatial operator leaves left = right = identity.
        let domain = Domain::interval(0.0, 1.0).unwrap();
        let nodes = chebyshev_1d(0.0, 1.0, 6).unwrap();
        let alpha = 1.5;
        let problem = zero_problem(domain, alpha, 0.0);
        let grid = TimeGrid::new(1.0, 3).unwrap();
        let w =
            WeightMatrix::from_parts(alpha, 0.0, Mat::zeros(nodes.len(), nodes.len())).unwrap();
        let sys = build_system(&problem, &nodes, &[w], &grid).unwrap();
        let ni = nodes.interior_idx().len();
        assert_eq!(sys.left, Mat::identity(ni));
        assert_eq!(sys.right, Mat::identity(ni));
    }

    #[test]
    fn all_zero_kappa_is_rejected() {
        let domain = Domain::interval(0.0, 1.0).unwrap();
        let nodes = chebyshev_1d(0.0, 1.0, 6).unwrap();
        let alpha = 1.5;
        let mut problem = zero_problem(domain, alpha, 0.0);
        problem.terms[0].kappa = constant(0.0);
        let grid = TimeGrid::new(1.0, 3).unwrap();
        let w =
            WeightMatrix::from_parts(alpha, 0.0, Mat::zeros(nodes.len(), nodes.len())).unwrap();
        assert!(build_system(&problem, &nodes, &[w], &grid).is_err());
    }

    #[test]
    fn boundary_values_are_assigned_exactly() {
        let domain = Domain::interval(0.0, 1.0).unwrap();
        let nodes = chebyshev_1d(0.0, 1.0, 8).unwrap();
        let alpha = 1.5;
        let rule = gauss_jacobi_cached(alpha, 50).unwrap();
        let rbf = Rbf::new(RbfFamily::Gaussian, 2.0).unwrap();
        let (w, _) = compute_weights(&rbf, &nodes, &Direction::new(0.0), alpha, &domain, &rule)
            .unwrap();
        let problem = ProblemSpec {
            domain,
            terms: vec![
                FractionalTerm::new(alpha, Direction::new(0.0), constant(1.0)).unwrap(),
            ],
            source: Arc::new(|_, _, _| 0.0),
            initial: Arc::new(|_, _| 0.0),
            boundary: Arc::new(|x, _, t| x + 3.0 * t),
            horizon: 1.0,
        };
        let grid = TimeGrid::new(1.0, 4).unwrap();
        let report = advance(&problem, &nodes, &[w], &grid, SnapshotPolicy::FinalOnly).unwrap();
        for &i in nodes.boundary_idx() {
            let p = nodes.point(i);
            assert_eq!(report.final_solution[i], p.x + 3.0);
        }
    }

    /// Steady manufactured state: with u(x) = x^4 and the source balancing
    /// the fractional term exactly (via the power-function derivative
    /// `D^alpha x^4 = 24 x^(4-alpha) / Gamma(5-alpha)`), the solution must
    /// stay put regardless of the step count.
    #[test]
    fn steady_state_error_independent_of_step_count() {
        let alpha = 1.5;
        let domain = Domain::interval(0.0, 1.0).unwrap();
        let nodes = chebyshev_1d(0.0, 1.0, 20).unwrap();
        let rule = gauss_jacobi_cached(alpha, 50).unwrap();
        let rbf = Rbf::new(RbfFamily::Multiquadric, 0.15).unwrap();
        let (w, report) = compute_weights(
            &rbf,
            &nodes,
            &Direction::new(0.0),
            alpha,
            &domain,
            &rule,
        )
        .unwrap();
        assert!(report.max_residual < 1e-6);

        let problem = ProblemSpec {
            domain,
            terms: vec![
                FractionalTerm::new(alpha, Direction::new(0.0), constant(1.0)).unwrap(),
            ],
            source: Arc::new(move |x: f64, _, _| -24.0 * x.powf(4.0 - alpha) / gamma(5.0 - alpha)),
            initial: Arc::new(|x, _| x.powi(4)),
            boundary: Arc::new(|x, _, _| x.powi(4)),
            horizon: 1.0,
        };

        // DQ truncation of the weights on x^4, from the power-function
        // derivative oracle D^alpha x^4 = 24 x^(4-alpha) / Gamma(5-alpha).
        let samples: Vec<f64> = nodes.points().iter().map(|p| p.x.powi(4)).collect();
        let applied = w.apply(&samples).unwrap();
        let truncation = nodes
            .points()
            .iter()
            .zip(&applied)
            .map(|(p, v)| (v - 24.0 * p.x.powf(4.0 - alpha) / gamma(5.0 - alpha)).abs())
            .fold(0.0f64, f64::max);

        let mut errs = Vec::new();
        for n in [5usize, 40] {
            let grid = TimeGrid::new(1.0, n).unwrap();
            let rep = advance(&problem, &nodes, std::slice::from_ref(&w), &grid,
                SnapshotPolicy::FinalOnly)
                .unwrap();
            let err = rep
                .final_solution
                .iter()
                .zip(nodes.points())
                .map(|(u, p)| (u - p.x.powi(4)).abs())
                .fold(0.0f64, f64::max);
            errs.push(err);
        }
        // The drift is bounded by the spatial truncation alone, with a
        // constant that does not grow with the step count: an 8x refinement
        // of tau must leave the error on the same order.
        for e in &errs {
            assert!(
                *e <= 30.0 * truncation,
                "steady-state drift {e} vs truncation {truncation}"
            );
        }
        let ratio = errs[0].max(errs[1]) / errs[0].min(errs[1]).max(1e-300);
        assert!(
            ratio <= 3.0,
            "drift scales with step count: {} vs {}",
            errs[0],
            errs[1]
        );
    }

    #[test]
    fn snapshot_stride_captures_intermediate_states() {
        let domain = Domain::interval(0.0, 1.0).unwrap();
        let nodes = chebyshev_1d(0.0, 1.0, 8).unwrap();
        let alpha = 1.5;
        let problem = zero_problem(domain.clone(), alpha, 0.0);
        let rule = gauss_jacobi_cached(alpha, 50).unwrap();
        let rbf = Rbf::new(RbfFamily::Gaussian, 2.0).unwrap();
        let (w, _) = compute_weights(&rbf, &nodes, &Direction::new(0.0), alpha, &domain, &rule)
            .unwrap();
        let grid = TimeGrid::new(1.0, 10).unwrap();
        let report = advance(&problem, &nodes, &[w], &grid, SnapshotPolicy::Stride(3)).unwrap();
        let times: Vec<f64> = report.snapshots.iter().map(|(t, _)| *t).collect();
        assert_eq!(times.len(), 4); // t = 0.3, 0.6, 0.9 and the final 1.0
        assert_relative_eq!(times[0], 0.3, epsilon = 1e-12);
        assert_relative_eq!(times[3], 1.0, epsilon = 1e-12);
    }
}
