//! Computational domains and the two geometric queries the method needs:
//! point classification and the directional distance to the boundary.
//!
//! The distance `z(p, theta)` is measured along the ray with direction
//! `(-cos theta, -sin theta)` to the first intersection with the boundary.
//! On non-convex domains a ray can leave and re-enter; the first crossing is
//! the one that matters because the solution is taken to vanish outside the
//! domain, so nothing beyond the first exit contributes to the fractional
//! integral.

use crate::error::{Error, Result};

/// Relative classification tolerance: points within `BOUNDARY_TOL_FACTOR *
/// diameter` of the boundary classify as boundary points.
pub const BOUNDARY_TOL_FACTOR: f64 = 1e-10;

/// Determinant cutoff for the parametric ray-segment solve.
const RAY_DET_CUTOFF: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(&self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// An angle with cached cosine and sine, normalized into [0, 2pi).
#[derive(Debug, Clone, Copy)]
pub struct Direction {
    theta: f64,
    cos_theta: f64,
    sin_theta: f64,
}

impl Direction {
    pub fn new(theta: f64) -> Self {
        let two_pi = 2.0 * std::f64::consts::PI;
        let mut t = theta.rem_euclid(two_pi);
        if t >= two_pi {
            t = 0.0;
        }
        Self {
            theta: t,
            cos_theta: t.cos(),
            sin_theta: t.sin(),
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn cos(&self) -> f64 {
        self.cos_theta
    }

    pub fn sin(&self) -> f64 {
        self.sin_theta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    Interior,
    Boundary,
    Exterior,
}

impl std::fmt::Display for PointClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PointClass::Interior => "interior",
            PointClass::Boundary => "boundary",
            PointClass::Exterior => "exterior",
        };
        f.write_str(s)
    }
}

/// A computational domain. 1D problems use [`Domain::Interval`] with y = 0
/// and directions restricted to theta in {0, pi}.
#[derive(Debug, Clone)]
pub enum Domain {
    Interval { a: f64, b: f64 },
    Polygon { vertices: Vec<Point2> },
    Circle { center: Point2, radius: f64 },
}

impl Domain {
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidDomain(format!(
                "interval requires finite a < b, got [{a}, {b}]"
            )));
        }
        Ok(Domain::Interval { a, b })
    }

    /// Builds a simple polygon from counter-clockwise vertices.
    pub fn polygon(vertices: Vec<Point2>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidDomain(
                "polygon needs at least 3 vertices".to_string(),
            ));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidDomain(
                "polygon vertices must be finite".to_string(),
            ));
        }
        let area2 = signed_area_2(&vertices);
        if area2 <= 0.0 {
            return Err(Error::InvalidDomain(
                "polygon vertices must be counter-clockwise".to_string(),
            ));
        }
        if !is_simple(&vertices) {
            return Err(Error::InvalidDomain(
                "polygon must not self-intersect".to_string(),
            ));
        }
        Ok(Domain::Polygon { vertices })
    }

    pub fn circle(center: Point2, radius: f64) -> Result<Self> {
        if !(center.is_finite() && radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidDomain(
                "circle needs a finite center and radius > 0".to_string(),
            ));
        }
        Ok(Domain::Circle { center, radius })
    }

    /// Convenience constructors for the benchmark shapes.
    pub fn unit_square() -> Self {
        Domain::polygon(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ])
        .expect("unit square is a valid polygon")
    }

    pub fn is_one_dimensional(&self) -> bool {
        matches!(self, Domain::Interval { .. })
    }

    pub fn diameter(&self) -> f64 {
        match self {
            Domain::Interval { a, b } => b - a,
            Domain::Circle { radius, .. } => 2.0 * radius,
            Domain::Polygon { vertices } => {
                let mut d = 0.0f64;
                for (i, v) in vertices.iter().enumerate() {
                    for w in &vertices[i + 1..] {
                        d = d.max(v.dist(*w));
                    }
                }
                d
            }
        }
    }

    /// Axis-aligned bounding box as (min corner, max corner).
    pub fn bounding_box(&self) -> (Point2, Point2) {
        match self {
            Domain::Interval { a, b } => (Point2::new(*a, 0.0), Point2::new(*b, 0.0)),
            Domain::Circle { center, radius } => (
                Point2::new(center.x - radius, center.y - radius),
                Point2::new(center.x + radius, center.y + radius),
            ),
            Domain::Polygon { vertices } => {
                let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
                let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
                for v in vertices {
                    lo.x = lo.x.min(v.x);
                    lo.y = lo.y.min(v.y);
                    hi.x = hi.x.max(v.x);
                    hi.y = hi.y.max(v.y);
                }
                (lo, hi)
            }
        }
    }

    /// Absolute classification tolerance for this domain.
    pub fn boundary_tol(&self) -> f64 {
        BOUNDARY_TOL_FACTOR * self.diameter()
    }

    pub fn classify(&self, p: Point2) -> PointClass {
        let tol = self.boundary_tol();
        match self {
            Domain::Interval { a, b } => {
                if p.y.abs() > tol {
                    return PointClass::Exterior;
                }
                if (p.x - a).abs() <= tol || (p.x - b).abs() <= tol {
                    PointClass::Boundary
                } else if p.x > *a && p.x < *b {
                    PointClass::Interior
                } else {
                    PointClass::Exterior
                }
            }
            Domain::Circle { center, radius } => {
                let d = p.dist(*center);
                if (d - radius).abs() <= tol {
                    PointClass::Boundary
                } else if d < *radius {
                    PointClass::Interior
                } else {
                    PointClass::Exterior
                }
            }
            Domain::Polygon { vertices } => {
                if distance_to_polygon_boundary(vertices, p) <= tol {
                    PointClass::Boundary
                } else if point_in_polygon(vertices, p) {
                    PointClass::Interior
                } else {
                    PointClass::Exterior
                }
            }
        }
    }

    /// Distance from `p` along the ray with direction
    /// `(-cos theta, -sin theta)` to the first boundary crossing. Returns 0
    /// when `p` lies on the boundary and the ray immediately exits.
    pub fn boundary_distance(&self, p: Point2, d: &Direction) -> Result<f64> {
        if self.classify(p) == PointClass::Exterior {
            return Err(Error::PointOutsideDomain { x: p.x, y: p.y });
        }
        match self {
            Domain::Interval { a, b } => {
                // 1D problems only make sense along the axis directions.
                let th = d.theta();
                if th.abs() <= 1e-12 {
                    Ok((p.x - a).max(0.0))
                } else if (th - std::f64::consts::PI).abs() <= 1e-12 {
                    Ok((b - p.x).max(0.0))
                } else {
                    Err(Error::InvalidParam(format!(
                        "interval domains support theta in {{0, pi}}, got {th}"
                    )))
                }
            }
            _ => {
                let ux = -d.cos();
                let uy = -d.sin();
                let mut hits = self.ray_hits(p, ux, uy);
                hits.sort_by(|x, y| x.partial_cmp(y).expect("finite ray parameters"));
                let tol = self.boundary_tol();
                let near = hits.iter().any(|&t| t <= tol);
                let far = hits.iter().copied().find(|&t| t > tol);
                match far {
                    None => Ok(0.0),
                    Some(t_far) => {
                        if near {
                            // p sits on the boundary; probe whether the ray
                            // enters the domain or leaves it at once.
                            let tp = 0.5 * t_far;
                            let probe = Point2::new(p.x + tp * ux, p.y + tp * uy);
                            if self.classify(probe) == PointClass::Exterior {
                                Ok(0.0)
                            } else {
                                Ok(t_far)
                            }
                        } else {
                            Ok(t_far)
                        }
                    }
                }
            }
        }
    }

    /// Horizontal chord limits through `p`: `(p.x - z(theta=0), p.x +
    /// z(theta=pi))`.
    pub fn axis_limits(&self, p: Point2) -> Result<(f64, f64)> {
        let z0 = self.boundary_distance(p, &Direction::new(0.0))?;
        let zpi = self.boundary_distance(p, &Direction::new(std::f64::consts::PI))?;
        Ok((p.x - z0, p.x + zpi))
    }

    /// Nonnegative ray parameters of boundary crossings of `p + t (ux, uy)`.
    fn ray_hits(&self, p: Point2, ux: f64, uy: f64) -> Vec<f64> {
        match self {
            Domain::Interval { .. } => unreachable!("interval handled separately"),
            Domain::Circle { center, radius } => {
                let dx = p.x - center.x;
                let dy = p.y - center.y;
                // |d + t u|^2 = r^2 with |u| = 1.
                let b = dx * ux + dy * uy;
                let c = dx * dx + dy * dy - radius * radius;
                let disc = b * b - c;
                if disc < 0.0 {
                    return vec![];
                }
                let sq = disc.sqrt();
                [-b - sq, -b + sq]
                    .into_iter()
                    .filter(|&t| t >= 0.0)
                    .collect()
            }
            Domain::Polygon { vertices } => {
                let scale = self.diameter();
                let mut hits = Vec::new();
                let n = vertices.len();
                for i in 0..n {
                    let v0 = vertices[i];
                    let v1 = vertices[(i + 1) % n];
                    let ex = v1.x - v0.x;
                    let ey = v1.y - v0.y;
                    // p + t u = v0 + s e
                    let det = ux * (-ey) - (-ex) * uy;
                    if det.abs() < RAY_DET_CUTOFF * scale {
                        continue; // parallel or collinear edge
                    }
                    let wx = v0.x - p.x;
                    let wy = v0.y - p.y;
                    let t = (wx * (-ey) - (-ex) * wy) / det;
                    let s = (ux * wy - uy * wx) / det;
                    let s_tol = 1e-12;
                    if t >= 0.0 && s >= -s_tol && s <= 1.0 + s_tol {
                        hits.push(t);
                    }
                }
                hits
            }
        }
    }
}

fn signed_area_2(vertices: &[Point2]) -> f64 {
    let n = vertices.len();
    let mut s = 0.0;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        s += a.x * b.y - b.x * a.y;
    }
    s
}

fn distance_to_segment(p: Point2, a: Point2, b: Point2) -> f64 {
    let ex = b.x - a.x;
    let ey = b.y - a.y;
    let len2 = ex * ex + ey * ey;
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = (((p.x - a.x) * ex + (p.y - a.y) * ey) / len2).clamp(0.0, 1.0);
    p.dist(Point2::new(a.x + t * ex, a.y + t * ey))
}

fn distance_to_polygon_boundary(vertices: &[Point2], p: Point2) -> f64 {
    let n = vertices.len();
    let mut d = f64::INFINITY;
    for i in 0..n {
        d = d.min(distance_to_segment(p, vertices[i], vertices[(i + 1) % n]));
    }
    d
}

/// Even-odd crossing test. Points within the classification tolerance of the
/// boundary are resolved by [`Domain::classify`] before this is consulted.
fn point_in_polygon(vertices: &[Point2], p: Point2) -> bool {
    let n = vertices.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let vi = vertices[i];
        let vj = vertices[j];
        if (vi.y > p.y) != (vj.y > p.y) {
            let x_cross = vi.x + (p.y - vi.y) * (vj.x - vi.x) / (vj.y - vi.y);
            if p.x < x_cross {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

fn segments_properly_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let cross = |o: Point2, p: Point2, q: Point2| (p.x - o.x) * (q.y - o.y) - (q.x - o.x) * (p.y - o.y);
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

fn is_simple(vertices: &[Point2]) -> bool {
    let n = vertices.len();
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        for j in i + 1..n {
            // Skip adjacent edges (they share a vertex).
            if j == i || (j + 1) % n == i || (i + 1) % n == j {
                continue;
            }
            let c = vertices[j];
            let d = vertices[(j + 1) % n];
            if segments_properly_intersect(a, b, c, d) {
                return false;
            }
        }
    }
    true
}
