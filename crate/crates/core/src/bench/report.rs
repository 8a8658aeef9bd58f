//! CSV emitters for benchmark results and solution dumps. Floats are
//! printed with 17 significant digits so every row round-trips losslessly.

use std::io::Write;
use std::path::Path;

use crate::error::Result;
use crate::geometry::Point2;
use crate::rbf::RbfFamily;

pub const RESULTS_HEADER: &str = "case,rbf,M,N,Q,epsilon,e2,einf,rate,wall_ms,cond";

/// One row of the results CSV.
#[derive(Debug, Clone)]
pub struct ResultRow {
    pub case: String,
    pub rbf: RbfFamily,
    pub m: usize,
    pub n: usize,
    pub q: usize,
    pub epsilon: f64,
    pub e2: f64,
    pub einf: f64,
    /// Pairwise convergence rate against the previous row, when defined.
    pub rate: Option<f64>,
    pub wall_ms: f64,
    pub cond: f64,
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

impl ResultRow {
    pub fn to_csv_line(&self) -> String {
        let rate = self.rate.map(fmt).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.case,
            self.rbf,
            self.m,
            self.n,
            self.q,
            fmt(self.epsilon),
            fmt(self.e2),
            fmt(self.einf),
            rate,
            fmt(self.wall_ms),
            fmt(self.cond),
        )
    }
}

pub fn write_results_csv(path: impl AsRef<Path>, rows: &[ResultRow]) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "{RESULTS_HEADER}")?;
    for row in rows {
        writeln!(f, "{}", row.to_csv_line())?;
    }
    Ok(())
}

/// Per-node solution dump: `x,y,exact,numeric,abs_err`.
pub fn write_solution_csv(
    path: impl AsRef<Path>,
    points: &[Point2],
    exact: &[f64],
    numeric: &[f64],
) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "x,y,exact,numeric,abs_err")?;
    for ((p, e), u) in points.iter().zip(exact).zip(numeric) {
        writeln!(
            f,
            "{},{},{},{},{}",
            fmt(p.x),
            fmt(p.y),
            fmt(*e),
            fmt(*u),
            fmt((e - u).abs())
        )?;
    }
    Ok(())
}
