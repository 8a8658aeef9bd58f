//! Radial basis function kernels and their exact second directional
//! derivatives, which form the integrand of the fractional derivative.

use crate::error::{Error, Result};
use crate::geometry::{Direction, Point2};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RbfFamily {
    /// `sqrt(r^2 + eps^2)`; conditionally positive definite, so its weight
    /// system carries a constant augmentation.
    Multiquadric,
    /// `1 / sqrt(r^2 + eps^2)`.
    InverseMultiquadric,
    /// `exp(-eps^2 r^2)`.
    Gaussian,
}

impl RbfFamily {
    pub fn short_name(&self) -> &'static str {
        match self {
            RbfFamily::Multiquadric => "mq",
            RbfFamily::InverseMultiquadric => "imq",
            RbfFamily::Gaussian => "ga",
        }
    }

    pub fn from_short_name(s: &str) -> Option<Self> {
        match s {
            "mq" => Some(RbfFamily::Multiquadric),
            "imq" => Some(RbfFamily::InverseMultiquadric),
            "ga" => Some(RbfFamily::Gaussian),
            _ => None,
        }
    }
}

impl std::fmt::Display for RbfFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.short_name())
    }
}

/// A kernel family paired with its shape parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rbf {
    family: RbfFamily,
    epsilon: f64,
}

impl Rbf {
    pub fn new(family: RbfFamily, epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidParam(format!(
                "shape parameter must be positive, got {epsilon}"
            )));
        }
        Ok(Self { family, epsilon })
    }

    pub fn family(&self) -> RbfFamily {
        self.family
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Kernel value `phi(||p - center||)`.
    pub fn eval(&self, center: Point2, p: Point2) -> f64 {
        let rx = p.x - center.x;
        let ry = p.y - center.y;
        let r2 = rx * rx + ry * ry;
        let e2 = self.epsilon * self.epsilon;
        match self.family {
            RbfFamily::Multiquadric => (r2 + e2).sqrt(),
            RbfFamily::InverseMultiquadric => 1.0 / (r2 + e2).sqrt(),
            RbfFamily::Gaussian => (-e2 * r2).exp(),
        }
    }

    /// Second directional derivative
    /// `cos^2(t) d2/dx2 + sin^2(t) d2/dy2 + 2 sin(t) cos(t) d2/dxdy`
    /// of the kernel at `p`, in closed form.
    pub fn dir2(&self, center: Point2, p: Point2, d: &Direction) -> f64 {
        self.dir2_at(p.x - center.x, p.y - center.y, d.cos(), d.sin())
    }

    /// As [`Rbf::dir2`] with the offset and direction cosines unpacked; the
    /// hot loops of the fractional derivative call this directly.
    #[inline]
    pub(crate) fn dir2_at(&self, rx: f64, ry: f64, ct: f64, st: f64) -> f64 {
        let r2 = rx * rx + ry * ry;
        let e2 = self.epsilon * self.epsilon;
        let s = r2 + e2;
        match self.family {
            RbfFamily::Multiquadric => {
                // d2/dx2 = (ry^2 + eps^2) / s^(3/2), d2/dxdy = -rx ry / s^(3/2)
                let num = ct * ct * (ry * ry + e2) + st * st * (rx * rx + e2)
                    - 2.0 * st * ct * rx * ry;
                num / (s * s.sqrt())
            }
            RbfFamily::InverseMultiquadric => {
                let s32 = s * s.sqrt();
                let s52 = s32 * s;
                (3.0 * ct * ct * rx * rx + 3.0 * st * st * ry * ry + 6.0 * st * ct * rx * ry)
                    / s52
                    - 1.0 / s32
            }
            RbfFamily::Gaussian => {
                2.0 * e2
                    * (-e2 * r2).exp()
                    * (2.0 * e2 * ct * ct * rx * rx + 2.0 * e2 * st * st * ry * ry
                        + 4.0 * e2 * st * ct * rx * ry
                        - 1.0)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[test]
    fn values_at_center() {
        let mq = Rbf::new(RbfFamily::Multiquadric, 0.5).unwrap();
        assert_relative_eq!(mq.eval(ORIGIN, ORIGIN), 0.5);
        let imq = Rbf::new(RbfFamily::InverseMultiquadric, 1.0).unwrap();
        assert_relative_eq!(imq.eval(ORIGIN, ORIGIN), 1.0);
        let ga = Rbf::new(RbfFamily::Gaussian, 2.0).unwrap();
        assert_relative_eq!(
            ga.eval(ORIGIN, Point2::new(1.0, 0.0)),
            (-4.0f64).exp(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn dir2_at_center_closed_forms() {
        let d = Direction::new(1.234);
        let ga = Rbf::new(RbfFamily::Gaussian, 1.7).unwrap();
        assert_relative_eq!(ga.dir2(ORIGIN, ORIGIN, &d), -2.0 * 1.7 * 1.7, max_relative = 1e-15);
        let imq = Rbf::new(RbfFamily::InverseMultiquadric, 0.9).unwrap();
        assert_relative_eq!(
            imq.dir2(ORIGIN, ORIGIN, &d),
            -0.9f64.powi(-3),
            max_relative = 1e-14
        );
    }

    #[test]
    fn rejects_nonpositive_epsilon() {
        assert!(Rbf::new(RbfFamily::Gaussian, 0.0).is_err());
        assert!(Rbf::new(RbfFamily::Gaussian, -1.0).is_err());
    }

    /// Central second difference of the kernel along the direction.
    fn dir2_fd(rbf: &Rbf, center: Point2, p: Point2, d: &Direction, h: f64) -> f64 {
        let shift = |s: f64| Point2::new(p.x + s * d.cos(), p.y + s * d.sin());
        (rbf.eval(center, shift(h)) - 2.0 * rbf.eval(center, p) + rbf.eval(center, shift(-h)))
            / (h * h)
    }

    #[test]
    fn mq_dir2_matches_finite_difference_case() {
        let rbf = Rbf::new(RbfFamily::Multiquadric, 0.8).unwrap();
        let d = Direction::new(std::f64::consts::FRAC_PI_6);
        let p = Point2::new(0.3, 0.4);
        let exact = rbf.dir2(ORIGIN, p, &d);
        let fd = dir2_fd(&rbf, ORIGIN, p, &d, 1e-4);
        assert_relative_eq!(exact, fd, max_relative = 1e-6);
    }

    fn family_strategy() -> impl Strategy<Value = RbfFamily> {
        prop_oneof![
            Just(RbfFamily::Multiquadric),
            Just(RbfFamily::InverseMultiquadric),
            Just(RbfFamily::Gaussian),
        ]
    }

    proptest! {
        #[test]
        fn dir2_agrees_with_finite_differences(
            family in family_strategy(),
            eps in 0.1f64..10.0,
            cx in -1.0f64..1.0,
            cy in -1.0f64..1.0,
            px in -1.0f64..1.0,
            py in -1.0f64..1.0,
            theta in 0.0f64..(2.0 * std::f64::consts::PI),
        ) {
            let rbf = Rbf::new(family, eps).unwrap();
            let d = Direction::new(theta);
            let center = Point2::new(cx, cy);
            let p = Point2::new(px, py);
            let exact = rbf.dir2(center, p, &d);
            let fd = dir2_fd(&rbf, center, p, &d, 1e-4);
            // Guard the relative comparison against cancellation when the
            // derivative is tiny next to the kernel scale.
            let scale = exact.abs().max(1e-3 * eps.max(1.0));
            prop_assert!((exact - fd).abs() <= 1e-5 * scale,
                "family={family:?} eps={eps} exact={exact} fd={fd}");
        }

        #[test]
        fn dir2_rotation_invariance(
            family in family_strategy(),
            eps in 0.1f64..10.0,
            rx in -1.0f64..1.0,
            ry in -1.0f64..1.0,
            theta in 0.0f64..(2.0 * std::f64::consts::PI),
            rot in 0.0f64..(2.0 * std::f64::consts::PI),
        ) {
            let rbf = Rbf::new(family, eps).unwrap();
            let base = rbf.dir2(ORIGIN, Point2::new(rx, ry), &Direction::new(theta));
            let (c, s) = (rot.cos(), rot.sin());
            let rotated = Point2::new(c * rx - s * ry, s * rx + c * ry);
            let rotated_val = rbf.dir2(ORIGIN, rotated, &Direction::new(theta + rot));
            let scale = base.abs().max(1e-12);
            prop_assert!((base - rotated_val).abs() <= 1e-11 * scale.max(1.0),
                "base={base} rotated={rotated_val}");
        }

        #[test]
        fn dir2_even_in_direction(
            family in family_strategy(),
            eps in 0.1f64..10.0,
            rx in -1.0f64..1.0,
            ry in -1.0f64..1.0,
            theta in 0.0f64..(2.0 * std::f64::consts::PI),
        ) {
            let rbf = Rbf::new(family, eps).unwrap();
            let p = Point2::new(rx, ry);
            let a = rbf.dir2(ORIGIN, p, &Direction::new(theta));
            let b = rbf.dir2(ORIGIN, p, &Direction::new(theta + std::f64::consts::PI));
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }
}
