//! Collocation node sets: generation, ingestion, and the interior/boundary
//! index partition.
//!
//! Node file format (UTF-8 text): lines of `x y flag` with flag `interior`
//! or `boundary`, `#` comments allowed. The writer emits `# fracdq nodes v1`
//! as its first line.

use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{Domain, Point2, PointClass};

/// Minimum pairwise distance allowed between nodes.
pub const MIN_NODE_SEPARATION: f64 = 1e-12;

/// Merge tolerance (relative to the domain diameter) when boundary samples
/// coincide with lattice points.
const DEDUPE_FACTOR: f64 = 1e-9;

/// An ordered set of collocation points with its interior/boundary
/// partition.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    points: Vec<Point2>,
    interior_idx: Vec<usize>,
    boundary_idx: Vec<usize>,
}

impl NodeSet {
    /// Builds a node set from points and per-point boundary flags, checking
    /// the partition and duplicate-point invariants.
    pub fn new(points: Vec<Point2>, is_boundary: Vec<bool>) -> Result<Self> {
        if points.len() != is_boundary.len() {
            return Err(Error::DimensionMismatch(
                "points and flags differ in length".to_string(),
            ));
        }
        if points.is_empty() {
            return Err(Error::InvalidParam("empty node set".to_string()));
        }
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidParam(format!(
                "non-finite node ({}, {})",
                p.x, p.y
            )));
        }
        for (i, p) in points.iter().enumerate() {
            for q in &points[i + 1..] {
                if p.dist(*q) <= MIN_NODE_SEPARATION {
                    return Err(Error::InvalidParam(format!(
                        "duplicate nodes at ({}, {})",
                        p.x, p.y
                    )));
                }
            }
        }
        let mut interior_idx = Vec::new();
        let mut boundary_idx = Vec::new();
        for (i, &b) in is_boundary.iter().enumerate() {
            if b {
                boundary_idx.push(i);
            } else {
                interior_idx.push(i);
            }
        }
        Ok(Self {
            points,
            interior_idx,
            boundary_idx,
        })
    }

    /// Total number of nodes, M + 1.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The nodal parameter M (one less than the point count).
    pub fn m(&self) -> usize {
        self.points.len() - 1
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn point(&self, i: usize) -> Point2 {
        self.points[i]
    }

    pub fn interior_idx(&self) -> &[usize] {
        &self.interior_idx
    }

    pub fn boundary_idx(&self) -> &[usize] {
        &self.boundary_idx
    }

    pub fn is_boundary(&self, i: usize) -> bool {
        self.boundary_idx.binary_search(&i).is_ok()
    }

    /// Checks that every point classifies consistently with its flag.
    pub fn validate_against(&self, domain: &Domain) -> Result<()> {
        for (i, p) in self.points.iter().enumerate() {
            let class = domain.classify(*p);
            let flag = if self.is_boundary(i) {
                "boundary"
            } else {
                "interior"
            };
            let ok = match class {
                PointClass::Interior => flag == "interior",
                PointClass::Boundary => flag == "boundary",
                PointClass::Exterior => false,
            };
            if !ok {
                return Err(Error::NodeClassMismatch {
                    x: p.x,
                    y: p.y,
                    flag: flag.to_string(),
                    actual: class.to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(f, "# fracdq nodes v1")?;
        for (i, p) in self.points.iter().enumerate() {
            let flag = if self.is_boundary(i) {
                "boundary"
            } else {
                "interior"
            };
            writeln!(f, "{:.16e} {:.16e} {}", p.x, p.y, flag)?;
        }
        Ok(())
    }
}

/// Chebyshev-distributed 1D nodes `x_j = 0.5 (1 - cos(j pi / M)) (b - a) + a`
/// on `[a, b]`, with the two endpoints flagged as boundary.
pub fn chebyshev_1d(a: f64, b: f64, m: usize) -> Result<NodeSet> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidParam(format!(
            "chebyshev_1d requires a < b, got [{a}, {b}]"
        )));
    }
    if m < 2 {
        return Err(Error::InvalidParam(format!(
            "chebyshev_1d requires M >= 2, got {m}"
        )));
    }
    let len = b - a;
    let points: Vec<Point2> = (0..=m)
        .map(|j| {
            let x = 0.5 * (1.0 - (j as f64 * std::f64::consts::PI / m as f64).cos()) * len + a;
            Point2::new(x, 0.0)
        })
        .collect();
    let flags: Vec<bool> = (0..=m).map(|j| j == 0 || j == m).collect();
    NodeSet::new(points, flags)
}

/// Sample points along the domain boundary at spacing `h`. Polygon edges are
/// subdivided uniformly (vertices included); circles are sampled at equal
/// angles.
fn boundary_samples(domain: &Domain, h: f64) -> Vec<Point2> {
    match domain {
        Domain::Interval { a, b } => vec![Point2::new(*a, 0.0), Point2::new(*b, 0.0)],
        Domain::Circle { center, radius } => {
            let m = ((2.0 * std::f64::consts::PI * radius / h).round() as usize).max(8);
            (0..m)
                .map(|k| {
                    let phi = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                    Point2::new(center.x + radius * phi.cos(), center.y + radius * phi.sin())
                })
                .collect()
        }
        Domain::Polygon { vertices } => {
            let n = vertices.len();
            let mut out = Vec::new();
            for i in 0..n {
                let v0 = vertices[i];
                let v1 = vertices[(i + 1) % n];
                let len = v0.dist(v1);
                let m = ((len / h).round() as usize).max(1);
                // Omit the endpoint: the next edge contributes it.
                for k in 0..m {
                    let t = k as f64 / m as f64;
                    out.push(Point2::new(
                        v0.x + t * (v1.x - v0.x),
                        v0.y + t * (v1.y - v0.y),
                    ));
                }
            }
            out
        }
    }
}

/// Projects a near-boundary point onto the boundary.
fn snap_to_boundary(domain: &Domain, p: Point2) -> Point2 {
    match domain {
        Domain::Interval { a, b } => {
            if (p.x - a).abs() <= (p.x - b).abs() {
                Point2::new(*a, 0.0)
            } else {
                Point2::new(*b, 0.0)
            }
        }
        Domain::Circle { center, radius } => {
            let dx = p.x - center.x;
            let dy = p.y - center.y;
            let d = dx.hypot(dy);
            if d == 0.0 {
                return Point2::new(center.x + radius, center.y);
            }
            Point2::new(center.x + radius * dx / d, center.y + radius * dy / d)
        }
        Domain::Polygon { vertices } => {
            let n = vertices.len();
            let mut best = vertices[0];
            let mut best_d = f64::INFINITY;
            for i in 0..n {
                let a = vertices[i];
                let b = vertices[(i + 1) % n];
                let ex = b.x - a.x;
                let ey = b.y - a.y;
                let len2 = ex * ex + ey * ey;
                let t = if len2 == 0.0 {
                    0.0
                } else {
                    (((p.x - a.x) * ex + (p.y - a.y) * ey) / len2).clamp(0.0, 1.0)
                };
                let q = Point2::new(a.x + t * ex, a.y + t * ey);
                let d = p.dist(q);
                if d < best_d {
                    best_d = d;
                    best = q;
                }
            }
            best
        }
    }
}

struct Builder {
    points: Vec<Point2>,
    flags: Vec<bool>,
    dedupe: f64,
}

impl Builder {
    fn new(dedupe: f64) -> Self {
        Self {
            points: Vec::new(),
            flags: Vec::new(),
            dedupe,
        }
    }

    /// Adds a point unless an existing one sits within the merge tolerance.
    fn push(&mut self, p: Point2, boundary: bool) -> bool {
        if self.points.iter().any(|q| q.dist(p) <= self.dedupe) {
            return false;
        }
        self.points.push(p);
        self.flags.push(boundary);
        true
    }

    fn len(&self) -> usize {
        self.points.len()
    }
}

/// Lattice points of an `nx x ny` grid over the bounding box, classified and
/// boundary-snapped, plus boundary samples at the lattice spacing.
fn build_lattice(domain: &Domain, nx: usize) -> Builder {
    let (lo, hi) = domain.bounding_box();
    let width = hi.x - lo.x;
    let height = hi.y - lo.y;
    let hx = width / (nx - 1) as f64;
    let ny = ((height / hx).round() as usize + 1).max(2);
    let hy = height / (ny - 1) as f64;
    let tol = domain.boundary_tol();
    let mut b = Builder::new(DEDUPE_FACTOR * domain.diameter());
    for iy in 0..ny {
        for ix in 0..nx {
            let p = Point2::new(lo.x + ix as f64 * hx, lo.y + iy as f64 * hy);
            match domain.classify(p) {
                PointClass::Interior => {
                    b.push(p, false);
                }
                PointClass::Boundary => {
                    b.push(snap_to_boundary(domain, p), true);
                }
                PointClass::Exterior => {}
            }
        }
    }
    debug_assert!(tol < hx);
    for p in boundary_samples(domain, hx) {
        b.push(p, true);
    }
    b
}

/// Quasi-uniform lattice nodes over a 2D domain, targeting `target_count`
/// total points. Lattice points within the classification tolerance of the
/// boundary are snapped onto it; the boundary itself is sampled at the
/// lattice spacing so it is fully represented.
pub fn grid_2d(domain: &Domain, target_count: usize) -> Result<NodeSet> {
    if domain.is_one_dimensional() {
        return Err(Error::InvalidParam(
            "grid_2d requires a 2D domain".to_string(),
        ));
    }
    if target_count == 0 {
        return Err(Error::InvalidParam("target count must be > 0".to_string()));
    }
    let mut best: Option<(usize, Builder)> = None;
    for nx in 2..=4096usize {
        let b = build_lattice(domain, nx);
        let count = b.len();
        let diff = count.abs_diff(target_count);
        let better = match &best {
            None => true,
            Some((best_diff, _)) => diff < *best_diff,
        };
        if better {
            best = Some((diff, b));
        }
        if count > 4 * target_count + 64 {
            break;
        }
    }
    let (_, b) = best.expect("lattice search always yields a candidate");
    if b.len() < 8 {
        return Err(Error::InvalidParam(format!(
            "grid produced only {} points; raise the target count",
            b.len()
        )));
    }
    NodeSet::new(b.points, b.flags)
}

/// Radical-inverse (van der Corput) value of index `i` in the given base.
fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    let b = base as f64;
    while i > 0 {
        f /= b;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Deterministic scattered nodes: boundary samples at the quasi-uniform
/// spacing for `target_count`, then a Halton (bases 2 and 3) interior fill
/// thinned to a minimum separation of `0.5 / sqrt(target_count)` times the
/// domain diameter. The seed offsets the Halton index, so equal arguments
/// reproduce identical sets.
pub fn scattered_2d(domain: &Domain, target_count: usize, seed: u64) -> Result<NodeSet> {
    if domain.is_one_dimensional() {
        return Err(Error::InvalidParam(
            "scattered_2d requires a 2D domain".to_string(),
        ));
    }
    if target_count < 8 {
        return Err(Error::InvalidParam(
            "target count must be at least 8".to_string(),
        ));
    }
    let (lo, hi) = domain.bounding_box();
    let width = hi.x - lo.x;
    let height = hi.y - lo.y;
    let diam = domain.diameter();
    let sep = 0.5 / (target_count as f64).sqrt() * diam;
    let h_boundary = (width * height / target_count as f64).sqrt();

    let mut b = Builder::new(DEDUPE_FACTOR * diam);
    for p in boundary_samples(domain, h_boundary) {
        b.push(p, true);
    }
    if b.len() + 1 > target_count {
        return Err(Error::TargetUnreachable {
            target: target_count,
            achieved: b.len(),
        });
    }

    let budget = 2000 + 600 * target_count as u64;
    let mut index = seed.wrapping_mul(0x9e37_79b9).wrapping_add(1);
    let mut attempts = 0u64;
    while b.len() < target_count && attempts < budget {
        let p = Point2::new(
            lo.x + width * radical_inverse(index, 2),
            lo.y + height * radical_inverse(index, 3),
        );
        index += 1;
        attempts += 1;
        if domain.classify(p) != PointClass::Interior {
            continue;
        }
        if b.points.iter().any(|q| q.dist(p) < sep) {
            continue;
        }
        b.push(p, false);
    }
    if b.len() < target_count {
        return Err(Error::TargetUnreachable {
            target: target_count,
            achieved: b.len(),
        });
    }
    NodeSet::new(b.points, b.flags)
}

/// Loads a node file and re-validates every point against the domain.
pub fn load_nodes(path: impl AsRef<Path>, domain: &Domain) -> Result<NodeSet> {
    let f = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut points = Vec::new();
    let mut flags = Vec::new();
    for (lineno, line) in f.lines().enumerate() {
        let line = line?;
        let line_number = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut parts = trimmed.split_whitespace();
        let parse_f64 = |tok: Option<&str>, what: &str| -> Result<f64> {
            let tok = tok.ok_or_else(|| Error::NodeParse {
                line: line_number,
                msg: format!("missing {what}"),
            })?;
            tok.parse::<f64>().map_err(|_| Error::NodeParse {
                line: line_number,
                msg: format!("invalid {what} '{tok}'"),
            })
        };
        let x = parse_f64(parts.next(), "x coordinate")?;
        let y = parse_f64(parts.next(), "y coordinate")?;
        let flag = parts.next().ok_or_else(|| Error::NodeParse {
            line: line_number,
            msg: "missing flag".to_string(),
        })?;
        let boundary = match flag {
            "interior" => false,
            "boundary" => true,
            other => {
                return Err(Error::NodeParse {
                    line: line_number,
                    msg: format!("flag must be 'interior' or 'boundary', got '{other}'"),
                })
            }
        };
        if let Some(extra) = parts.next() {
            return Err(Error::NodeParse {
                line: line_number,
                msg: format!("unexpected trailing token '{extra}'"),
            });
        }
        points.push(Point2::new(x, y));
        flags.push(boundary);
    }
    let set = NodeSet::new(points, flags)?;
    set.validate_against(domain)?;
    Ok(set)
}
