//! Meshless differential-quadrature (DQ) solver for multi-term space-fractional
//! diffusion equations on arbitrary 2D domains.
//!
//! The spatial operator is a sum of Caputo directional derivatives of orders
//! `alpha_l` in (1, 2] along angles `theta_l`. Each derivative is approximated
//! at every collocation node as a weighted sum of the solution values at all
//! nodes; the weights are obtained by collocating radial basis functions
//! (Multiquadric, Inverse Multiquadric, Gaussian) and evaluating their
//! fractional derivatives with a Gauss-Jacobi rule that absorbs the weakly
//! singular kernel. The resulting ODE system is advanced by the
//! Crank-Nicolson scheme.
//!
//! Module map:
//! - [`geometry`]: domains (interval, polygon, circle), point classification,
//!   directional boundary distances.
//! - [`nodes`]: collocation node generators (Chebyshev, lattice, Halton) and
//!   a text node-file loader.
//! - [`quadrature`]: Gauss-Jacobi rules for the weight `(1 + s)^(1 - alpha)`.
//! - [`rbf`]: kernels and their exact second directional derivatives.
//! - [`fracderiv`]: Caputo directional derivatives of the kernels.
//! - [`dqweights`]: assembly and solution of the DQ weight systems.
//! - [`stepper`]: Crank-Nicolson time stepping with boundary injection.
//! - [`bench`]: benchmark catalog, error norms, and convergence rates.

pub mod bench;
pub mod dqweights;
pub mod error;
pub mod fracderiv;
pub mod geometry;
pub mod linalg;
pub mod nodes;
pub mod quadrature;
pub mod rbf;
pub mod special;
pub mod stepper;

pub use dqweights::{CollocationReport, WeightMatrix};
pub use error::{Error, Result};
pub use geometry::{Direction, Domain, Point2, PointClass};
pub use nodes::NodeSet;
pub use quadrature::JacobiRule;
pub use rbf::{Rbf, RbfFamily};
pub use stepper::{FractionalTerm, ProblemSpec, SnapshotPolicy, SolveReport, TimeGrid};
