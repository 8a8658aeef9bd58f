//! Fractional-derivative checks against the adaptive singular-integral
//! oracle and the quadrature-refinement invariant.

mod common;

use common::singular_integral;
use fracdq_core::fracderiv::frac_dir_deriv;
use fracdq_core::geometry::{Direction, Domain, Point2};
use fracdq_core::quadrature::gauss_jacobi;
use fracdq_core::rbf::{Rbf, RbfFamily};
use fracdq_core::special::gamma;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn oracle_value(rbf: &Rbf, center: Point2, node: Point2, d: &Direction, alpha: f64, z: f64) -> f64 {
    let (ct, st) = (d.cos(), d.sin());
    let g = move |w: f64| rbf.dir2(center, Point2::new(node.x - ct * w, node.y - st * w), d);
    singular_integral(&g, z, alpha, 1e-12) / gamma(2.0 - alpha)
}

#[test]
fn gaussian_reference_configuration() {
    let domain = Domain::unit_square();
    let rbf = Rbf::new(RbfFamily::Gaussian, 3.0).unwrap();
    let center = Point2::new(0.4, 0.6);
    let node = Point2::new(0.7, 0.5);
    let d = Direction::new(std::f64::consts::FRAC_PI_4);
    let alpha = 1.6;
    let z = domain.boundary_distance(node, &d).unwrap();
    let rule = gauss_jacobi(alpha, 50).unwrap();
    let got = frac_dir_deriv(&rbf, center, node, &d, alpha, z, &rule).unwrap();
    let want = oracle_value(&rbf, center, node, &d, alpha, z);
    assert!(
        (got - want).abs() <= 1e-8 * (1.0 + want.abs()),
        "{got} vs oracle {want}"
    );
}

#[test]
fn quadrature_refinement_is_converged_at_fifty_points() {
    let domain = Domain::unit_square();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let families = [
        RbfFamily::Multiquadric,
        RbfFamily::InverseMultiquadric,
        RbfFamily::Gaussian,
    ];
    for _ in 0..20 {
        let family = families[rng.gen_range(0..3)];
        let eps = rng.gen_range(0.5..4.0);
        let rbf = Rbf::new(family, eps).unwrap();
        let alpha = rng.gen_range(1.05..1.95);
        let d = Direction::new(rng.gen_range(0.0..(2.0 * std::f64::consts::PI)));
        let node = Point2::new(rng.gen_range(0.1..0.9), rng.gen_range(0.1..0.9));
        let center = Point2::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
        let z = domain.boundary_distance(node, &d).unwrap();
        let r50 = gauss_jacobi(alpha, 50).unwrap();
        let r100 = gauss_jacobi(alpha, 100).unwrap();
        let v50 = frac_dir_deriv(&rbf, center, node, &d, alpha, z, &r50).unwrap();
        let v100 = frac_dir_deriv(&rbf, center, node, &d, alpha, z, &r100).unwrap();
        assert!(
            (v50 - v100).abs() <= 1e-9 * (1.0 + v100.abs()),
            "Q refinement drift: {v50} vs {v100} (family {family:?}, alpha {alpha})"
        );
    }
}

#[test]
fn oracle_self_check_on_power_function() {
    // int_0^z w^(1-alpha) * w dw = z^(3-alpha)/(3-alpha); the regularized
    // split must reproduce it to the requested tolerance.
    let alpha = 1.7;
    let z = 0.83;
    let got = singular_integral(&|w| w, z, alpha, 1e-13);
    let want = z.powf(3.0 - alpha) / (3.0 - alpha);
    assert!((got - want).abs() <= 1e-12 * want.abs());
}

#[test]
fn gauss_kronrod_panel_is_accurate_on_smooth_integrands() {
    let (v, _) = common::gk15(&|x: f64| x.exp(), 0.0, 1.0);
    assert!((v - (1f64.exp() - 1.0)).abs() < 1e-14);
    let v = common::adaptive_quad(&|x: f64| (5.0 * x).sin(), 0.0, 2.0, 1e-13);
    let want = (1.0 - (10.0f64).cos()) / 5.0;
    assert!((v - want).abs() < 1e-12);
}
