//! Problem files (TOML) and the compact domain / node-source grammars.
//!
//! A problem file describes a custom initial-boundary-value problem:
//!
//! ```toml
//! horizon = 1.0
//! source = "-2*exp(-t)*pow(x,4)"
//! initial = "pow(x,4)"
//! boundary = "exp(-t)*pow(x,4)"
//! exact = "exp(-t)*pow(x,4)"        # optional
//!
//! [domain]
//! kind = "interval"                  # interval | polygon | circle
//! a = 0.0
//! b = 1.0
//!
//! [[term]]
//! alpha = 1.5
//! theta = "0"
//! kappa = "pow(x,1.5)*gamma(3.5)/24"
//! ```

use std::path::Path;
use std::sync::Arc;

use fracdq_core::bench::catalog::PdeCase;
use fracdq_core::geometry::{Direction, Domain, Point2};
use fracdq_core::nodes::{self, NodeSet};
use fracdq_core::stepper::{FractionalTerm, ProblemSpec};
use serde::Deserialize;

use crate::expr;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    domain: DomainSection,
    horizon: f64,
    source: String,
    initial: String,
    boundary: String,
    exact: Option<String>,
    #[serde(rename = "term")]
    terms: Vec<TermSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DomainSection {
    kind: String,
    a: Option<f64>,
    b: Option<f64>,
    vertices: Option<Vec<[f64; 2]>>,
    center: Option<[f64; 2]>,
    radius: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermSection {
    alpha: f64,
    theta: String,
    kappa: String,
}

fn domain_from_section(s: &DomainSection) -> Result<Domain, String> {
    match s.kind.as_str() {
        "interval" => {
            let (a, b) = (
                s.a.ok_or("interval domain needs 'a'")?,
                s.b.ok_or("interval domain needs 'b'")?,
            );
            Domain::interval(a, b).map_err(|e| e.to_string())
        }
        "polygon" => {
            let verts = s
                .vertices
                .as_ref()
                .ok_or("polygon domain needs 'vertices'")?
                .iter()
                .map(|v| Point2::new(v[0], v[1]))
                .collect();
            Domain::polygon(verts).map_err(|e| e.to_string())
        }
        "circle" => {
            let c = s.center.ok_or("circle domain needs 'center'")?;
            let r = s.radius.ok_or("circle domain needs 'radius'")?;
            Domain::circle(Point2::new(c[0], c[1]), r).map_err(|e| e.to_string())
        }
        other => Err(format!(
            "unknown domain kind '{other}' (interval | polygon | circle)"
        )),
    }
}

fn const_expr(src: &str, what: &str) -> Result<f64, String> {
    let e = expr::parse(src).map_err(|e| format!("{what}: {e}"))?;
    Ok(e.eval(0.0, 0.0, 0.0))
}

/// Loads a problem file into a catalog-style case. The case name is the file
/// stem; when no `exact` expression is given the error columns are reported
/// as NaN.
pub fn load_problem(path: &Path) -> Result<PdeCase, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let file: ProblemFile =
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    if file.terms.is_empty() {
        return Err("problem file needs at least one [[term]]".to_string());
    }
    let domain = domain_from_section(&file.domain)?;

    let mut terms = Vec::new();
    for (i, t) in file.terms.iter().enumerate() {
        let theta = const_expr(&t.theta, &format!("term {i} theta"))?;
        let kappa = expr::parse(&t.kappa).map_err(|e| format!("term {i} kappa: {e}"))?;
        let term = FractionalTerm::new(
            t.alpha,
            Direction::new(theta),
            Arc::new(move |x, y| kappa.eval(x, y, 0.0)),
        )
        .map_err(|e| e.to_string())?;
        terms.push(term);
    }

    let source = expr::parse(&file.source).map_err(|e| format!("source: {e}"))?;
    let initial = expr::parse(&file.initial).map_err(|e| format!("initial: {e}"))?;
    let boundary = expr::parse(&file.boundary).map_err(|e| format!("boundary: {e}"))?;
    let exact = match &file.exact {
        Some(src) => {
            let e = expr::parse(src).map_err(|e| format!("exact: {e}"))?;
            Some(e)
        }
        None => None,
    };

    let problem = ProblemSpec {
        domain,
        terms,
        source: Arc::new(move |x, y, t| source.eval(x, y, t)),
        initial: Arc::new(move |x, y| initial.eval(x, y, 0.0)),
        boundary: Arc::new(move |x, y, t| boundary.eval(x, y, t)),
        horizon: file.horizon,
    };
    problem.validate().map_err(|e| e.to_string())?;

    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "custom".to_string());
    let exact_fn: fracdq_core::stepper::SpaceTimeFn = match exact {
        Some(e) => Arc::new(move |x, y, t| e.eval(x, y, t)),
        None => Arc::new(|_, _, _| f64::NAN),
    };
    Ok(PdeCase {
        name,
        problem,
        exact: exact_fn,
    })
}

/// Compact domain grammar for `fracdq weights`:
/// `interval:a,b` | `square` | `circle:cx,cy,r` | `polygon:x1,y1;x2,y2;...`.
pub fn parse_domain_spec(spec: &str) -> Result<Domain, String> {
    if spec == "square" {
        return Ok(Domain::unit_square());
    }
    if let Some(rest) = spec.strip_prefix("interval:") {
        let nums = parse_numbers(rest, ',')?;
        if nums.len() != 2 {
            return Err("interval needs two numbers: interval:a,b".to_string());
        }
        return Domain::interval(nums[0], nums[1]).map_err(|e| e.to_string());
    }
    if let Some(rest) = spec.strip_prefix("circle:") {
        let nums = parse_numbers(rest, ',')?;
        if nums.len() != 3 {
            return Err("circle needs three numbers: circle:cx,cy,r".to_string());
        }
        return Domain::circle(Point2::new(nums[0], nums[1]), nums[2]).map_err(|e| e.to_string());
    }
    if let Some(rest) = spec.strip_prefix("polygon:") {
        let mut verts = Vec::new();
        for pair in rest.split(';') {
            let nums = parse_numbers(pair, ',')?;
            if nums.len() != 2 {
                return Err(format!("polygon vertex '{pair}' must be x,y"));
            }
            verts.push(Point2::new(nums[0], nums[1]));
        }
        return Domain::polygon(verts).map_err(|e| e.to_string());
    }
    Err(format!(
        "unknown domain spec '{spec}' (square | interval:a,b | circle:cx,cy,r | polygon:x1,y1;...)"
    ))
}

fn parse_numbers(s: &str, sep: char) -> Result<Vec<f64>, String> {
    s.split(sep)
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| format!("invalid number '{tok}'"))
        })
        .collect()
}

/// Node-source grammar: `cheb:M` | `grid:COUNT` | `scatter:COUNT[:seed=S]` |
/// a node-file path.
pub fn resolve_nodes(spec: &str, domain: &Domain) -> Result<NodeSet, String> {
    if let Some(rest) = spec.strip_prefix("cheb:") {
        let m: usize = rest
            .parse()
            .map_err(|_| format!("invalid M in '{spec}'"))?;
        let (a, b) = match domain {
            Domain::Interval { a, b } => (*a, *b),
            _ => return Err("cheb nodes need an interval domain".to_string()),
        };
        return nodes::chebyshev_1d(a, b, m).map_err(|e| e.to_string());
    }
    if let Some(rest) = spec.strip_prefix("grid:") {
        let count: usize = rest
            .parse()
            .map_err(|_| format!("invalid count in '{spec}'"))?;
        return nodes::grid_2d(domain, count).map_err(|e| e.to_string());
    }
    if let Some(rest) = spec.strip_prefix("scatter:") {
        let mut parts = rest.split(':');
        let count: usize = parts
            .next()
            .unwrap_or_default()
            .parse()
            .map_err(|_| format!("invalid count in '{spec}'"))?;
        let mut seed = 1u64;
        for extra in parts {
            if let Some(s) = extra.strip_prefix("seed=") {
                seed = s
                    .parse()
                    .map_err(|_| format!("invalid seed in '{spec}'"))?;
            } else {
                return Err(format!("unknown scatter option '{extra}'"));
            }
        }
        return nodes::scattered_2d(domain, count, seed).map_err(|e| e.to_string());
    }
    nodes::load_nodes(Path::new(spec), domain).map_err(|e| e.to_string())
}
