//! The benchmark catalog: one derivative-approximation case (ex51) and five
//! manufactured diffusion problems (ex52 to ex56) on the interval, square,
//! trapezoidal, circular, and L-shaped domains, together with the published
//! per-configuration shape parameters.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{Direction, Domain, Point2};
use crate::rbf::RbfFamily;
use crate::special::gamma;
use crate::stepper::{FractionalTerm, ProblemSpec, SpaceTimeFn};

use super::{space_fn, space_time_fn};

/// A fractional-derivative approximation benchmark on an interval.
pub struct DerivativeCase {
    pub name: String,
    pub interval: (f64, f64),
    pub alpha: f64,
    pub theta: Direction,
    pub target: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub exact_deriv: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

/// A full initial-boundary-value benchmark with a known exact solution.
pub struct PdeCase {
    pub name: String,
    pub problem: ProblemSpec,
    pub exact: SpaceTimeFn,
}

pub enum CatalogCase {
    Derivative(DerivativeCase),
    Pde(PdeCase),
}

/// Right-sided fractional derivative benchmark: approximate
/// `D_pi^alpha (1 - x)^z` on [0, 1], whose exact value is
/// `Gamma(z+1)/Gamma(z+1-alpha) (1-x)^(z-alpha)`.
pub fn ex51() -> DerivativeCase {
    let alpha = 1.2;
    let z = 3.0;
    DerivativeCase {
        name: "ex51".to_string(),
        interval: (0.0, 1.0),
        alpha,
        theta: Direction::new(std::f64::consts::PI),
        target: Arc::new(move |x| (1.0 - x).powf(z)),
        exact_deriv: Arc::new(move |x| {
            gamma(z + 1.0) / gamma(z + 1.0 - alpha) * (1.0 - x).powf(z - alpha)
        }),
    }
}

/// 1D diffusion on [0, 1] with exact solution `e^-t x^4`.
pub fn ex52() -> PdeCase {
    let alpha = 1.5;
    let problem = ProblemSpec {
        domain: Domain::interval(0.0, 1.0).expect("unit interval"),
        terms: vec![FractionalTerm::new(
            alpha,
            Direction::new(0.0),
            space_fn(move |x, _| x.powf(alpha) * gamma(5.0 - alpha) / 24.0),
        )
        .expect("valid order")],
        source: space_time_fn(|x, _, t| -2.0 * (-t).exp() * x.powi(4)),
        initial: space_fn(|x, _| x.powi(4)),
        boundary: space_time_fn(|x, _, t| if x < 0.5 { 0.0 } else { (-t).exp() }),
        horizon: 1.0,
    };
    PdeCase {
        name: "ex52".to_string(),
        problem,
        exact: space_time_fn(|x, _, t| (-t).exp() * x.powi(4)),
    }
}

/// 2D two-term diffusion on the unit square along the axis directions, with
/// exact solution `e^-t x^3 y^3.6`.
pub fn ex53i() -> PdeCase {
    let a1 = 1.8;
    let a2 = 1.6;
    let problem = ProblemSpec {
        domain: Domain::unit_square(),
        terms: vec![
            FractionalTerm::new(
                a1,
                Direction::new(0.0),
                space_fn(|x, y| gamma(2.2) * x.powf(2.8) * y / 6.0),
            )
            .expect("valid order"),
            FractionalTerm::new(
                a2,
                Direction::new(std::f64::consts::FRAC_PI_2),
                space_fn(|x, y| 2.0 * x * y.powf(2.6) / gamma(4.6)),
            )
            .expect("valid order"),
        ],
        source: space_time_fn(|x, y, t| {
            -(-t).exp() * (1.0 + 2.0 * x * y) * x.powi(3) * y.powf(3.6)
        }),
        initial: space_fn(|x, y| x.powi(3) * y.powf(3.6)),
        boundary: space_time_fn(|x, y, t| {
            let tol = 1e-9;
            if x <= tol || y <= tol {
                0.0
            } else if x >= 1.0 - tol {
                (-t).exp() * y.powf(3.6)
            } else if y >= 1.0 - tol {
                (-t).exp() * x.powi(3)
            } else {
                (-t).exp() * x.powi(3) * y.powf(3.6)
            }
        }),
        horizon: 1.0,
    };
    PdeCase {
        name: "ex53i".to_string(),
        problem,
        exact: space_time_fn(|x, y, t| (-t).exp() * x.powi(3) * y.powf(3.6)),
    }
}

/// Closed form of the diagonal (theta = pi/4) Caputo derivative of `x^2 y^2`
/// when the back-ray ends on the coordinate axes, split by which axis it
/// reaches first.
fn diag_deriv_x2y2(al: f64, x: f64, y: f64) -> f64 {
    let pre = 2f64.powf(1.0 - al / 2.0) / gamma(5.0 - al);
    if x >= y {
        pre * y.powf(2.0 - al)
            * ((al - 4.0) * (al - 3.0) * x * x - 2.0 * (al - 4.0) * al * x * y
                + (al - 1.0) * al * y * y)
    } else {
        pre * x.powf(2.0 - al)
            * ((al - 1.0) * al * x * x - 2.0 * (al - 4.0) * al * x * y
                + (al - 4.0) * (al - 3.0) * y * y)
    }
}

/// One-term diffusion on the unit square along theta = pi/4, with exact
/// solution `e^-t x^2 y^2`.
pub fn ex53ii() -> PdeCase {
    let a1 = 1.8;
    let problem = ProblemSpec {
        domain: Domain::unit_square(),
        terms: vec![FractionalTerm::new(
            a1,
            Direction::new(std::f64::consts::FRAC_PI_4),
            space_fn(move |x, _| x.powf(a1)),
        )
        .expect("valid order")],
        source: space_time_fn(move |x, y, t| {
            -(-t).exp() * x * x * y * y - (-t).exp() * x.powf(a1) * diag_deriv_x2y2(a1, x, y)
        }),
        initial: space_fn(|x, y| x * x * y * y),
        boundary: space_time_fn(|x, y, t| {
            let tol = 1e-9;
            if x <= tol || y <= tol {
                0.0
            } else if x >= 1.0 - tol {
                (-t).exp() * y * y
            } else if y >= 1.0 - tol {
                (-t).exp() * x * x
            } else {
                (-t).exp() * x * x * y * y
            }
        }),
        horizon: 1.0,
    };
    PdeCase {
        name: "ex53ii".to_string(),
        problem,
        exact: space_time_fn(|x, y, t| (-t).exp() * x * x * y * y),
    }
}

fn gstar1(al: f64, x: f64, y: f64) -> f64 {
    0.75 * x.powi(3) * y.powi(3) / gamma(4.0 - al) - 18.0 * x.powi(4) * y.powi(2) / gamma(5.0 - al)
        + 180.0 * x.powi(5) * y / gamma(6.0 - al)
        - 720.0 * x.powi(6) / gamma(7.0 - al)
}

fn gstar2(al: f64, x: f64, y: f64) -> f64 {
    (0.75 * (al - 2.0) * (al - 1.0) * al * y.powi(3)
        + 18.0 * (al - 1.0) * al * x * y.powi(2)
        + 180.0 * al * x * x * y
        + 720.0 * x.powi(3))
        / gamma(7.0 - al)
}

/// The trapezoid whose right edge is the zero set of the solution factor
/// `0.5 (3 - y) - x`.
pub fn trapezoid_domain() -> Domain {
    Domain::polygon(vec![
        Point2::new(0.0, 0.0),
        Point2::new(1.5, 0.0),
        Point2::new(1.0, 1.0),
        Point2::new(0.0, 1.0),
    ])
    .expect("trapezoid is a valid polygon")
}

/// Two-term diffusion (theta = 0 and pi) on the trapezoid, with exact
/// solution `e^-t x^3 (0.5 (3 - y) - x)^3`.
pub fn ex54() -> PdeCase {
    let a1 = 1.1;
    let a2 = 1.3;
    let exact = space_time_fn(|x, y, t| {
        (-t).exp() * x.powi(3) * (0.5 * (3.0 - y) - x).powi(3)
    });
    let exact_for_bc = Arc::clone(&exact);
    let exact_for_ic = Arc::clone(&exact);
    let problem = ProblemSpec {
        domain: trapezoid_domain(),
        terms: vec![
            FractionalTerm::new(a1, Direction::new(0.0), space_fn(move |x, _| x.powf(a1)))
                .expect("valid order"),
            FractionalTerm::new(
                a2,
                Direction::new(std::f64::consts::PI),
                space_fn(move |x, y| (1.5 - x - 0.5 * y).powf(a2 - 3.0)),
            )
            .expect("valid order"),
        ],
        source: space_time_fn(move |x, y, t| {
            -(-t).exp() * x.powi(3) * (0.5 * (3.0 - y) - x).powi(3)
                - (-t).exp() * (gstar1(a1, x, 3.0 - y) + gstar2(a2, x, y - 3.0))
        }),
        initial: space_fn(move |x, y| exact_for_ic(x, y, 0.0)),
        boundary: space_time_fn(move |x, y, t| exact_for_bc(x, y, t)),
        horizon: 1.0,
    };
    PdeCase {
        name: "ex54".to_string(),
        problem,
        exact,
    }
}

/// The circular-domain case: `(x - 0.5 + sqrt(0.25 - (y - 0.5)^2))` measures
/// the horizontal distance to the left arc, so the theta = 0 derivative of
/// the exact solution has a one-term closed form.
pub fn ex55() -> PdeCase {
    let alpha = 1.9;
    // Clamp the radicand: boundary nodes can land a rounding error outside.
    let chord = |y: f64| (0.25 - (y - 0.5) * (y - 0.5)).max(0.0).sqrt();
    let exact = space_time_fn(move |x, y, t| {
        let r = x - 0.5 + chord(y);
        t * t * r * r * y * y
    });
    let exact_for_bc = Arc::clone(&exact);
    let problem = ProblemSpec {
        domain: Domain::circle(Point2::new(0.5, 0.5), 0.5).expect("unit-diameter circle"),
        terms: vec![FractionalTerm::new(
            alpha,
            Direction::new(0.0),
            space_fn(move |_, y: f64| y.powf(alpha) / 2.0),
        )
        .expect("valid order")],
        source: space_time_fn(move |x, y, t| {
            let r = x - 0.5 + chord(y);
            2.0 * t * r * r * y * y
                - t * t * r.max(0.0).powf(2.0 - alpha) * y.powf(2.0 + alpha) / gamma(3.0 - alpha)
        }),
        initial: space_fn(|_, _| 0.0),
        boundary: space_time_fn(move |x, y, t| exact_for_bc(x, y, t)),
        horizon: 1.0,
    };
    PdeCase {
        name: "ex55".to_string(),
        problem,
        exact,
    }
}

/// The L-shaped domain of the three-term case.
pub fn lshape_domain() -> Domain {
    Domain::polygon(vec![
        Point2::new(0.0, 0.0),
        Point2::new(1.0, 0.0),
        Point2::new(1.0, 0.5),
        Point2::new(0.5, 0.5),
        Point2::new(0.5, 1.0),
        Point2::new(0.0, 1.0),
    ])
    .expect("L-shape is a valid polygon")
}

/// Three-term diffusion (theta = 0, pi/4, pi/2, all of order `alpha`) on the
/// L-shaped domain, with exact solution `t^3 x^2 y^2`.
pub fn ex56(alpha: f64) -> Result<PdeCase> {
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(Error::InvalidParam(format!(
            "fractional order must lie in (1, 2], got {alpha}"
        )));
    }
    let kappa = move |x: f64, y: f64| x.powf(alpha) * y.powf(alpha);
    let thetas = [0.0, std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_2];
    let terms = thetas
        .iter()
        .map(|&t| FractionalTerm::new(alpha, Direction::new(t), space_fn(kappa)))
        .collect::<Result<Vec<_>>>()?;
    let exact = space_time_fn(|x, y, t| t.powi(3) * x * x * y * y);
    let exact_for_bc = Arc::clone(&exact);
    let problem = ProblemSpec {
        domain: lshape_domain(),
        terms,
        source: space_time_fn(move |x, y, t| {
            let axis_part = 2.0 * (x.powf(2.0 - alpha) * y * y + x * x * y.powf(2.0 - alpha))
                / gamma(3.0 - alpha);
            3.0 * t * t * x * x * y * y
                - t.powi(3) * kappa(x, y) * (diag_deriv_x2y2(alpha, x, y) + axis_part)
        }),
        initial: space_fn(|_, _| 0.0),
        boundary: space_time_fn(move |x, y, t| exact_for_bc(x, y, t)),
        horizon: 0.5,
    };
    Ok(PdeCase {
        name: format!("ex56:{alpha}"),
        problem,
        exact,
    })
}

/// Looks a case up by name. `ex56` takes an optional order suffix,
/// e.g. `ex56:1.8` (default 1.5).
pub fn by_name(name: &str) -> Result<CatalogCase> {
    match name {
        "ex51" => Ok(CatalogCase::Derivative(ex51())),
        "ex52" => Ok(CatalogCase::Pde(ex52())),
        "ex53i" => Ok(CatalogCase::Pde(ex53i())),
        "ex53ii" => Ok(CatalogCase::Pde(ex53ii())),
        "ex54" => Ok(CatalogCase::Pde(ex54())),
        "ex55" => Ok(CatalogCase::Pde(ex55())),
        "ex56" => Ok(CatalogCase::Pde(ex56(1.5)?)),
        other => {
            if let Some(suffix) = other.strip_prefix("ex56:") {
                let alpha: f64 = suffix.parse().map_err(|_| {
                    Error::InvalidParam(format!("invalid order in case name '{other}'"))
                })?;
                return Ok(CatalogCase::Pde(ex56(alpha)?));
            }
            Err(Error::InvalidParam(format!(
                "unknown case '{other}' (known: ex51 ex52 ex53i ex53ii ex54 ex55 ex56[:alpha])"
            )))
        }
    }
}

/// Published per-M shape parameters for the 1D tables and the circular GA
/// runs; per-case `c*` values for the 2D rule `eps = c*/(M+1)^0.25`; fixed
/// values for the L-shape.
enum EpsDefault {
    PerM(&'static [(usize, f64)]),
    CStar(f64),
    Fixed(f64),
}

fn eps_default(case: &str, family: RbfFamily) -> Option<EpsDefault> {
    use RbfFamily::*;
    let d = match (case, family) {
        ("ex51", Multiquadric) => EpsDefault::PerM(&[
            (10, 0.3112),
            (15, 0.2150),
            (20, 0.1678),
            (25, 0.1374),
        ]),
        ("ex51", InverseMultiquadric) => EpsDefault::PerM(&[
            (10, 0.4327),
            (15, 0.3328),
            (20, 0.2694),
            (25, 0.2255),
        ]),
        ("ex51", Gaussian) => EpsDefault::PerM(&[
            (10, 4.0381),
            (15, 5.3768),
            (20, 6.6514),
            (25, 7.8994),
        ]),
        ("ex52", Multiquadric) => EpsDefault::PerM(&[
            (15, 0.1875),
            (20, 0.1128),
            (25, 0.0712),
            (30, 0.0613),
        ]),
        ("ex52", InverseMultiquadric) => EpsDefault::PerM(&[
            (15, 0.3098),
            (20, 0.2135),
            (25, 0.1567),
            (30, 0.1149),
        ]),
        ("ex53i", Multiquadric) => EpsDefault::CStar(0.98),
        ("ex53i", InverseMultiquadric) => EpsDefault::CStar(1.22),
        ("ex53ii", Multiquadric) => EpsDefault::CStar(0.89),
        ("ex53ii", InverseMultiquadric) => EpsDefault::CStar(1.25),
        ("ex54", Multiquadric) => EpsDefault::CStar(0.75),
        ("ex54", InverseMultiquadric) => EpsDefault::CStar(1.05),
        ("ex55", InverseMultiquadric) => EpsDefault::CStar(0.85),
        ("ex55", Gaussian) => EpsDefault::PerM(&[
            (53, 5.4216),
            (79, 5.9814),
            (200, 7.5306),
            (401, 8.9554),
        ]),
        (name, Multiquadric) if name.starts_with("ex56") => EpsDefault::Fixed(0.2128),
        (name, InverseMultiquadric) if name.starts_with("ex56") => EpsDefault::Fixed(0.3445),
        (name, Gaussian) if name.starts_with("ex56") => EpsDefault::Fixed(4.6880),
        _ => return None,
    };
    Some(d)
}

/// Resolves the default shape parameter for a case, kernel, and nodal
/// parameter M, when one is on record.
pub fn default_epsilon(case: &str, family: RbfFamily, m: usize) -> Option<f64> {
    match eps_default(case, family)? {
        EpsDefault::PerM(table) => table.iter().find(|(mm, _)| *mm == m).map(|(_, e)| *e),
        EpsDefault::CStar(c) => Some(super::shape_param(c, m)),
        EpsDefault::Fixed(e) => Some(e),
    }
}

/// Nodal parameters (Chebyshev M for 1D, total node counts for 2D) used by
/// the published runs of each case.
pub fn default_m_values(case: &str) -> Option<&'static [usize]> {
    match case {
        "ex51" => Some(&[10, 15, 20, 25]),
        "ex52" => Some(&[15, 20, 25, 30]),
        "ex53i" => Some(&[100, 196, 289, 441]),
        "ex53ii" => Some(&[74, 144, 234, 424]),
        "ex54" => Some(&[66, 171, 287, 437]),
        "ex55" => Some(&[54, 80, 201, 402]),
        _ if case.starts_with("ex56") => Some(&[593]),
        _ => None,
    }
}

/// Default step counts used by the published runs.
pub fn default_steps(case: &str, m: usize) -> Option<usize> {
    match case {
        "ex52" => Some(m),
        "ex53i" => {
            let n = ((m + 1) as f64).sqrt() - 1.0;
            Some(n.round().max(1.0) as usize)
        }
        "ex53ii" => Some(2000),
        "ex54" => Some(5000),
        "ex55" => Some(5000),
        _ if case.starts_with("ex56") => Some(1000),
        _ => None,
    }
}

/// Preferred quadrature size.
pub const DEFAULT_Q: usize = 50;

#[cfg(test)]
mod tests {
    #![allow(clippy::excessive_precision)] // frozen 17-digit references

    use super::*;
    use approx::assert_relative_eq;

    /// Spot checks of the manufactured sources against values computed with
    /// 50-digit arithmetic.
    #[test]
    fn source_spot_checks() {
        let c52 = ex52();
        assert_relative_eq!(
            (c52.problem.source)(0.3, 0.0, 0.0),
            -0.016200000000000000,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            (c52.problem.source)(0.7, 0.0, 0.5),
            -0.29125602279400657,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            (c52.problem.source)(1.0, 0.0, 1.0),
            -0.73575888234288464,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            (c52.problem.terms[0].kappa)(0.5, 0.0),
            0.048957583488886729,
            max_relative = 1e-14
        );

        let c53i = ex53i();
        assert_relative_eq!(
            (c53i.problem.source)(0.3, 0.8, 0.0),
            -0.017895730575267181,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            (c53i.problem.source)(0.9, 0.2, 0.5),
            -0.0018315854300335486,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            (c53i.problem.source)(0.5, 0.5, 1.0),
            -0.0056885136660519108,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            (c53i.problem.terms[0].kappa)(0.3, 0.8),
            0.0050464038117053527,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            (c53i.problem.terms[1].kappa)(0.3, 0.8),
            0.025100788695127833,
            max_relative = 1e-14
        );

        let c53ii = ex53ii();
        assert_relative_eq!(
            (c53ii.problem.source)(0.7, 0.3, 0.0),
            -0.60855523100257445,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            (c53ii.problem.source)(0.25, 0.6, 0.5),
            -0.050997962322337805,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            (c53ii.problem.source)(0.5, 0.5, 1.0),
            -0.14498783559023248,
            max_relative = 1e-14
        );

        let c54 = ex54();
        assert_relative_eq!(
            (c54.problem.source)(0.4, 0.6, 0.0),
            0.26159254942659154,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            (c54.problem.source)(0.2, 0.3, 0.5),
            0.017040609630733667,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            (c54.problem.source)(0.8, 0.9, 1.0),
            -0.39074484772384729,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            (c54.exact)(0.4, 0.6, 0.0),
            0.032768000000000000,
            max_relative = 1e-14
        );

        let c55 = ex55();
        assert_relative_eq!(
            (c55.problem.source)(0.5, 0.5, 1.0),
            0.059303937118013887,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            (c55.problem.source)(0.7, 0.4, 0.5),
            0.069049324212032440,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            (c55.problem.source)(0.3, 0.75, 0.25),
            -0.0032229312628174106,
            max_relative = 1e-13
        );

        let c56 = ex56(1.5).unwrap();
        assert_relative_eq!(
            (c56.problem.source)(0.3, 0.2, 0.5),
            0.0022019596065574675,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            (c56.problem.source)(0.25, 0.8, 0.25),
            0.0053275456142978266,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            (c56.problem.source)(0.9, 0.4, 0.1),
            0.0032779516099549876,
            max_relative = 1e-13
        );
    }

    #[test]
    fn ex51_exact_derivative_value() {
        let c = ex51();
        assert_relative_eq!(
            (c.exact_deriv)(0.3),
            1.8833305491290505,
            max_relative = 1e-14
        );
    }

    /// Every exact solution must satisfy its own initial and boundary
    /// functions: the initial field at t = 0 over interior samples, the
    /// boundary field at random times over boundary samples.
    #[test]
    fn exact_solutions_match_initial_and_boundary_data() {
        let cases = vec![ex52(), ex53i(), ex53ii(), ex54(), ex55(), ex56(1.8).unwrap()];
        for case in cases {
            let domain = &case.problem.domain;
            let (lo, hi) = domain.bounding_box();
            // Deterministic pseudo-random samples.
            let mut state = 0x243f_6a88_85a3_08d3u64;
            let mut next = move || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 11) as f64 / (1u64 << 53) as f64
            };
            let mut interior_checked = 0;
            let mut boundary_checked = 0;
            let mut guard = 0;
            while (interior_checked < 200 || boundary_checked < 200) && guard < 100_000 {
                guard += 1;
                let x = lo.x + (hi.x - lo.x) * next();
                let y = lo.y + (hi.y - lo.y) * next();
                let p = if domain.is_one_dimensional() {
                    Point2::new(x, 0.0)
                } else {
                    Point2::new(x, y)
                };
                match domain.classify(p) {
                    crate::geometry::PointClass::Interior if interior_checked < 200 => {
                        interior_checked += 1;
                        let u0 = (case.problem.initial)(p.x, p.y);
                        let ue = (case.exact)(p.x, p.y, 0.0);
                        assert!(
                            (u0 - ue).abs() <= 1e-12 * (1.0 + ue.abs()),
                            "{}: initial mismatch at ({}, {})",
                            case.name,
                            p.x,
                            p.y
                        );
                    }
                    _ => {}
                }
                // Project a second sample onto the boundary via the domain's
                // directional distance.
                if boundary_checked < 200 {
                    let q = match domain {
                        Domain::Interval { a, b } => {
                            Point2::new(if next() < 0.5 { *a } else { *b }, 0.0)
                        }
                        Domain::Circle { center, radius } => {
                            let phi = 2.0 * std::f64::consts::PI * next();
                            Point2::new(
                                center.x + radius * phi.cos(),
                                center.y + radius * phi.sin(),
                            )
                        }
                        Domain::Polygon { vertices } => {
                            let n = vertices.len();
                            let e = (next() * n as f64) as usize % n;
                            let t = next();
                            let v0 = vertices[e];
                            let v1 = vertices[(e + 1) % n];
                            Point2::new(v0.x + t * (v1.x - v0.x), v0.y + t * (v1.y - v0.y))
                        }
                    };
                    boundary_checked += 1;
                    let t = next();
                    let g = (case.problem.boundary)(q.x, q.y, t);
                    let ue = (case.exact)(q.x, q.y, t);
                    assert!(
                        (g - ue).abs() <= 1e-12 * (1.0 + ue.abs()),
                        "{}: boundary mismatch at ({}, {}), t={}: {} vs {}",
                        case.name,
                        q.x,
                        q.y,
                        t,
                        g,
                        ue
                    );
                }
            }
            assert!(interior_checked >= 200 && boundary_checked >= 200);
        }
    }

    #[test]
    fn epsilon_defaults_resolve() {
        assert_relative_eq!(
            default_epsilon("ex51", RbfFamily::Multiquadric, 10).unwrap(),
            0.3112
        );
        assert_relative_eq!(
            default_epsilon("ex53i", RbfFamily::Multiquadric, 99).unwrap(),
            super::super::shape_param(0.98, 99)
        );
        assert_relative_eq!(
            default_epsilon("ex56:1.8", RbfFamily::Gaussian, 592).unwrap(),
            4.6880
        );
        assert!(default_epsilon("ex51", RbfFamily::Multiquadric, 11).is_none());
        assert!(default_epsilon("ex55", RbfFamily::Multiquadric, 100).is_none());
    }

    #[test]
    fn by_name_parses_ex56_orders() {
        assert!(matches!(by_name("ex51"), Ok(CatalogCase::Derivative(_))));
        match by_name("ex56:1.2") {
            Ok(CatalogCase::Pde(c)) => assert_eq!(c.problem.terms[0].alpha, 1.2),
            other => panic!("unexpected {:?}", other.is_ok()),
        }
        assert!(by_name("ex99").is_err());
        assert!(by_name("ex56:2.7").is_err());
    }

    #[test]
    fn default_steps_follow_published_runs() {
        assert_eq!(default_steps("ex52", 20), Some(20));
        assert_eq!(default_steps("ex53i", 99), Some(9));
        assert_eq!(default_steps("ex53i", 440), Some(20));
        assert_eq!(default_steps("ex56:1.5", 592), Some(1000));
        assert_eq!(default_steps("ex51", 10), None);
    }

    #[test]
    fn default_m_values_cover_every_case() {
        for case in ["ex51", "ex52", "ex53i", "ex53ii", "ex54", "ex55", "ex56:1.2"] {
            let ms = default_m_values(case).unwrap();
            assert!(!ms.is_empty());
        }
        // Each 1D entry has a matching shape parameter on record.
        for &m in default_m_values("ex52").unwrap() {
            assert!(default_epsilon("ex52", RbfFamily::Multiquadric, m).is_some());
        }
        assert!(default_m_values("nope").is_none());
    }
}
