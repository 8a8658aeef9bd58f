#![allow(dead_code)] // each test binary uses its own subset of these oracles

//! Shared test oracles, kept independent of the library code paths they
//! check: a ray-marching boundary-distance oracle and an adaptive
//! Gauss-Kronrod evaluator for the weakly singular Caputo integral.

use fracdq_core::geometry::{Direction, Domain, Point2, PointClass};

/// 15-point Kronrod nodes (symmetric halves) with the embedded 7-point
/// Gauss rule, from QUADPACK's dqk15.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_2,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One Gauss-Kronrod 15(7) panel: returns (kronrod value, error estimate).
pub fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut kronrod = 0.0;
    let mut gauss = 0.0;
    for (i, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let (fa, fb) = (f(mid - half * x), f(mid + half * x));
        let pair = if x == 0.0 { f(mid) } else { fa + fb };
        kronrod += wk * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    // The center node belongs to the Kronrod rule only.
    (half * kronrod, (half * (kronrod - gauss)).abs())
}

fn adaptive_rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: usize) -> f64 {
    let (value, err) = gk15(f, a, b);
    // Accept at the requested tolerance or at the roundoff floor of the
    // panel value; without the floor, large integrands recurse forever.
    if err <= tol + 1e-14 * value.abs() || depth >= 30 {
        return value;
    }
    let mid = 0.5 * (a + b);
    adaptive_rec(f, a, mid, 0.5 * tol, depth + 1) + adaptive_rec(f, mid, b, 0.5 * tol, depth + 1)
}

/// Adaptive Gauss-Kronrod quadrature to an absolute tolerance (with a
/// relative roundoff floor).
pub fn adaptive_quad(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    adaptive_rec(f, a, b, tol, 0)
}

/// `int_0^z w^(1-alpha) g(w) dw` for alpha in (1, 2), with the endpoint
/// singularity removed analytically: a quadratic Taylor model of `g` at 0 is
/// integrated in closed form (the split is exact for any model), and the
/// regularized remainder is handled by adaptive quadrature with grading
/// toward w = 0. `rel_tol` is relative to the integrand scale.
pub fn singular_integral(g: &dyn Fn(f64) -> f64, z: f64, alpha: f64, rel_tol: f64) -> f64 {
    assert!(z > 0.0);
    let h = z * 1e-3;
    let g0 = g(0.0);
    let gp = (g(h) - g(-h)) / (2.0 * h);
    let gpp = (g(h) - 2.0 * g0 + g(-h)) / (h * h);
    let analytic = g0 * z.powf(2.0 - alpha) / (2.0 - alpha)
        + gp * z.powf(3.0 - alpha) / (3.0 - alpha)
        + 0.5 * gpp * z.powf(4.0 - alpha) / (4.0 - alpha);
    let reg = move |w: f64| {
        if w <= 0.0 {
            0.0
        } else {
            w.powf(1.0 - alpha) * (g(w) - (g0 + gp * w + 0.5 * gpp * w * w))
        }
    };
    let scale = 1.0 + analytic.abs() + g0.abs() * z.powf(2.0 - alpha);
    analytic + adaptive_quad(&reg, 0.0, z, rel_tol * scale)
}

/// Marches the ray `p + t (-cos theta, -sin theta)` in small steps until the
/// point leaves the domain, then bisects the exit location.
pub fn ray_march_distance(domain: &Domain, p: Point2, theta: f64) -> f64 {
    let d = Direction::new(theta);
    let (ux, uy) = (-d.cos(), -d.sin());
    let diam = domain.diameter();
    let step = 1e-6 * diam;
    let outside =
        |t: f64| domain.classify(Point2::new(p.x + t * ux, p.y + t * uy)) == PointClass::Exterior;
    let mut t = 0.0;
    loop {
        t += step;
        if outside(t) {
            break;
        }
        assert!(t < 3.0 * diam, "ray never left the domain");
    }
    let (mut lo, mut hi) = (t - step, t);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if outside(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
