//! `fracdq`: run the benchmark catalog or custom problems, study
//! convergence, and dump DQ weight matrices.
//!
//! Exit codes: 0 success, 1 configuration error, 2 numerical failure
//! (singular system).

mod config;
mod expr;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand};
use fracdq_core::bench::report::{write_results_csv, write_solution_csv, ResultRow, RESULTS_HEADER};
use fracdq_core::bench::{self, catalog, conv_rate};
use fracdq_core::dqweights::{compute_weights, CONDITION_WARN_THRESHOLD};
use fracdq_core::error::Error as CoreError;
use fracdq_core::geometry::Direction;
use fracdq_core::quadrature::gauss_jacobi_cached;
use fracdq_core::rbf::{Rbf, RbfFamily};
use fracdq_core::stepper::SnapshotPolicy;
use rayon::prelude::*;

#[derive(Parser)]
#[command(
    name = "fracdq",
    about = "Meshless DQ solver for multi-term space-fractional diffusion equations",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one benchmark case or a custom problem file.
    Run(RunArgs),
    /// Run a case over a list of nodal parameters and report convergence
    /// rates.
    Convergence(ConvergenceArgs),
    /// Compute and dump a DQ weight matrix.
    Weights(WeightsArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("what").required(true).args(["case", "problem"])))]
#[command(group(ArgGroup::new("shape").required(true).args(["eps", "cstar"])))]
struct RunArgs {
    /// Catalog case name (ex51, ex52, ex53i, ex53ii, ex54, ex55, ex56[:alpha]).
    #[arg(long)]
    case: Option<String>,
    /// Custom problem file (TOML).
    #[arg(long)]
    problem: Option<PathBuf>,
    /// Kernel family: mq | imq | ga.
    #[arg(long)]
    rbf: String,
    /// Shape parameter.
    #[arg(long)]
    eps: Option<f64>,
    /// Shape-parameter rule eps = cstar / (M+1)^0.25.
    #[arg(long)]
    cstar: Option<f64>,
    /// Node source: cheb:M | grid:COUNT | scatter:COUNT[:seed=S] | file path.
    #[arg(long)]
    nodes: String,
    /// Crank-Nicolson step count (PDE cases).
    #[arg(long)]
    steps: Option<usize>,
    /// Gauss-Jacobi point count.
    #[arg(long, default_value_t = catalog::DEFAULT_Q)]
    quad: usize,
    /// Results CSV path.
    #[arg(long, default_value = "fracdq_results.csv")]
    out: PathBuf,
    /// Per-node solution dump (x,y,exact,numeric,abs_err).
    #[arg(long)]
    dump_solution: Option<PathBuf>,
    /// Capture every k-th time step alongside the solution dump.
    #[arg(long)]
    snapshot_stride: Option<usize>,
}

#[derive(Args)]
struct ConvergenceArgs {
    /// Catalog case name.
    #[arg(long)]
    case: String,
    /// Kernel family: mq | imq | ga.
    #[arg(long)]
    rbf: String,
    /// Comma-separated nodal parameters (Chebyshev M for 1D cases, target
    /// node counts for 2D cases).
    #[arg(long, value_delimiter = ',', required = true)]
    m: Vec<usize>,
    /// Comma-separated per-M shape parameters (same length as --m).
    #[arg(long, value_delimiter = ',')]
    eps_list: Option<Vec<f64>>,
    /// Shape-parameter rule eps = cstar / (M+1)^0.25.
    #[arg(long)]
    cstar: Option<f64>,
    /// Fixed step count (default: the case's published rule).
    #[arg(long)]
    steps: Option<usize>,
    /// 2D node generator: grid | scatter.
    #[arg(long, default_value = "grid")]
    nodes_kind: String,
    /// Seed for scattered node sets.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Gauss-Jacobi point count.
    #[arg(long, default_value_t = catalog::DEFAULT_Q)]
    quad: usize,
    /// Results CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("shape").required(true).args(["eps", "cstar"])))]
struct WeightsArgs {
    /// Kernel family: mq | imq | ga.
    #[arg(long)]
    rbf: String,
    /// Node source: cheb:M | grid:COUNT | scatter:COUNT[:seed=S] | file path.
    #[arg(long)]
    nodes: String,
    /// Domain: square | interval:a,b | circle:cx,cy,r | polygon:x1,y1;...
    #[arg(long, default_value = "interval:0,1")]
    domain: String,
    /// Fractional order in (1, 2].
    #[arg(long)]
    alpha: f64,
    /// Direction angle (expression, e.g. "pi" or "pi/4").
    #[arg(long)]
    theta: String,
    /// Shape parameter.
    #[arg(long)]
    eps: Option<f64>,
    /// Shape-parameter rule eps = cstar / (M+1)^0.25.
    #[arg(long)]
    cstar: Option<f64>,
    /// Gauss-Jacobi point count.
    #[arg(long, default_value_t = catalog::DEFAULT_Q)]
    quad: usize,
    /// Weight CSV path (i,j,weight).
    #[arg(long)]
    out: PathBuf,
}

enum CliError {
    Config(String),
    Numerical(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::SingularSystem { .. } => CliError::Numerical(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<String> for CliError {
    fn from(s: String) -> Self {
        CliError::Config(s)
    }
}

fn parse_family(s: &str) -> Result<RbfFamily, CliError> {
    RbfFamily::from_short_name(s)
        .ok_or_else(|| CliError::Config(format!("unknown RBF family '{s}' (mq | imq | ga)")))
}

fn resolve_eps(eps: Option<f64>, cstar: Option<f64>, m: usize) -> Option<f64> {
    eps.or_else(|| cstar.map(|c| bench::shape_param(c, m)))
}

fn print_row(row: &ResultRow) {
    println!("{RESULTS_HEADER}");
    println!("{}", row.to_csv_line());
}

fn cmd_run(args: &RunArgs) -> Result<(), CliError> {
    let family = parse_family(&args.rbf)?;

    // Derivative benchmark: no time stepping.
    if args.case.as_deref() == Some("ex51")
        || matches!(
            args.case.as_deref().map(catalog::by_name),
            Some(Ok(catalog::CatalogCase::Derivative(_)))
        )
    {
        let case = catalog::ex51();
        let m = match args.nodes.strip_prefix("cheb:") {
            Some(m) => m
                .parse::<usize>()
                .map_err(|_| CliError::Config(format!("invalid node spec '{}'", args.nodes)))?,
            None => {
                return Err(CliError::Config(
                    "derivative cases use Chebyshev nodes (--nodes cheb:M)".to_string(),
                ))
            }
        };
        let eps = resolve_eps(args.eps, args.cstar, m);
        let start = Instant::now();
        let run = bench::run_derivative_case_detailed(&case, family, eps, m, args.quad)?;
        let wall_ms = start.elapsed().as_secs_f64() * 1e3;
        println!(
            "case={} rbf={family} M={m} Q={} eps={:.6}",
            case.name, args.quad, run.epsilon
        );
        println!(
            "e2 = {:.6e}  einf = {:.6e}  cond = {:.3e}  wall = {:.1} ms",
            run.e2, run.einf, run.report.condition_estimate, wall_ms
        );
        let row = ResultRow {
            case: case.name.clone(),
            rbf: family,
            m,
            n: 0,
            q: args.quad,
            epsilon: run.epsilon,
            e2: run.e2,
            einf: run.einf,
            rate: None,
            wall_ms,
            cond: run.report.condition_estimate,
        };
        print_row(&row);
        write_results_csv(&args.out, &[row])?;
        return Ok(());
    }

    let case = match (&args.case, &args.problem) {
        (Some(name), None) => match catalog::by_name(name)? {
            catalog::CatalogCase::Pde(c) => c,
            catalog::CatalogCase::Derivative(_) => unreachable!("handled above"),
        },
        (None, Some(path)) => config::load_problem(path)?,
        _ => unreachable!("clap group enforces exactly one"),
    };

    let nodes = config::resolve_nodes(&args.nodes, &case.problem.domain)?;
    let n_steps = args
        .steps
        .or_else(|| catalog::default_steps(&case.name, nodes.m()))
        .ok_or_else(|| {
            CliError::Config("this case needs an explicit --steps count".to_string())
        })?;
    let eps = resolve_eps(args.eps, args.cstar, nodes.m());
    let capture = match args.snapshot_stride {
        Some(k) if k > 0 => SnapshotPolicy::Stride(k),
        _ => SnapshotPolicy::FinalOnly,
    };

    let run = bench::run_pde_case_with(&case, family, eps, &nodes, n_steps, args.quad, capture)?;
    println!(
        "case={} rbf={family} M={} N={n_steps} Q={} eps={:.6}",
        case.name,
        nodes.m(),
        args.quad,
        run.epsilon
    );
    println!(
        "e2 = {:.6e}  einf = {:.6e}  cond = {:.3e}  wall = {:.1} ms",
        run.e2,
        run.einf,
        run.condition,
        run.solve.wall_time * 1e3
    );
    if run.condition > CONDITION_WARN_THRESHOLD {
        eprintln!(
            "warning: condition estimate {:.3e} exceeds {CONDITION_WARN_THRESHOLD:.0e}; \
             results may be inaccurate (consider a larger shape parameter)",
            run.condition
        );
    }

    let row = ResultRow {
        case: case.name.clone(),
        rbf: family,
        m: nodes.m(),
        n: n_steps,
        q: args.quad,
        epsilon: run.epsilon,
        e2: run.e2,
        einf: run.einf,
        rate: None,
        wall_ms: run.solve.wall_time * 1e3,
        cond: run.condition,
    };
    print_row(&row);
    write_results_csv(&args.out, &[row])?;

    if let Some(dump) = &args.dump_solution {
        let exact = bench::exact_on_nodes(&case.exact, &nodes, case.problem.horizon);
        write_solution_csv(dump, nodes.points(), &exact, &run.solve.final_solution)?;
        for (k, (t, snap)) in run.solve.snapshots.iter().enumerate() {
            if *t == case.problem.horizon {
                continue;
            }
            let exact_t = bench::exact_on_nodes(&case.exact, &nodes, *t);
            let path = dump.with_extension(format!("snap{k}.csv"));
            write_solution_csv(path, nodes.points(), &exact_t, snap)?;
        }
    }
    Ok(())
}

struct ConvergenceRun {
    m: usize,
    n: usize,
    epsilon: f64,
    e2: f64,
    einf: f64,
    wall_ms: f64,
    cond: f64,
}

fn cmd_convergence(args: &ConvergenceArgs) -> Result<(), CliError> {
    let family = parse_family(&args.rbf)?;
    if args.m.len() < 2 {
        return Err(CliError::Config(
            "convergence needs at least two --m values".to_string(),
        ));
    }
    if let Some(list) = &args.eps_list {
        if list.len() != args.m.len() {
            return Err(CliError::Config(format!(
                "--eps-list has {} entries for {} --m values",
                list.len(),
                args.m.len()
            )));
        }
    }

    let is_derivative = matches!(
        catalog::by_name(&args.case)?,
        catalog::CatalogCase::Derivative(_)
    );

    let runs: Vec<Result<ConvergenceRun, CliError>> = args
        .m
        .par_iter()
        .enumerate()
        .map(|(idx, &m_param)| -> Result<ConvergenceRun, CliError> {
            let explicit_eps = args.eps_list.as_ref().map(|l| l[idx]);
            if is_derivative {
                let case = catalog::ex51();
                let eps =
                    explicit_eps.or_else(|| args.cstar.map(|c| bench::shape_param(c, m_param)));
                let start = Instant::now();
                let run =
                    bench::run_derivative_case_detailed(&case, family, eps, m_param, args.quad)?;
                Ok(ConvergenceRun {
                    m: m_param,
                    n: 0,
                    epsilon: run.epsilon,
                    e2: run.e2,
                    einf: run.einf,
                    wall_ms: start.elapsed().as_secs_f64() * 1e3,
                    cond: run.report.condition_estimate,
                })
            } else {
                let case = match catalog::by_name(&args.case)? {
                    catalog::CatalogCase::Pde(c) => c,
                    _ => unreachable!(),
                };
                let nodes = if case.problem.domain.is_one_dimensional() {
                    config::resolve_nodes(&format!("cheb:{m_param}"), &case.problem.domain)?
                } else {
                    match args.nodes_kind.as_str() {
                        "grid" => config::resolve_nodes(
                            &format!("grid:{m_param}"),
                            &case.problem.domain,
                        )?,
                        "scatter" => config::resolve_nodes(
                            &format!("scatter:{m_param}:seed={}", args.seed),
                            &case.problem.domain,
                        )?,
                        other => {
                            return Err(CliError::Config(format!(
                                "unknown --nodes-kind '{other}' (grid | scatter)"
                            )))
                        }
                    }
                };
                let n_steps = args
                    .steps
                    .or_else(|| catalog::default_steps(&case.name, nodes.m()))
                    .ok_or_else(|| {
                        CliError::Config("this case needs an explicit --steps count".to_string())
                    })?;
                let eps = explicit_eps
                    .or_else(|| args.cstar.map(|c| bench::shape_param(c, nodes.m())));
                let run =
                    bench::run_pde_case(&case, family, eps, &nodes, n_steps, args.quad)?;
                Ok(ConvergenceRun {
                    m: nodes.m(),
                    n: n_steps,
                    epsilon: run.epsilon,
                    e2: run.e2,
                    einf: run.einf,
                    wall_ms: run.solve.wall_time * 1e3,
                    cond: run.condition,
                })
            }
        })
        .collect();
    let runs: Vec<ConvergenceRun> = runs.into_iter().collect::<Result<_, _>>()?;

    let dim = if is_derivative
        || matches!(
            catalog::by_name(&args.case),
            Ok(catalog::CatalogCase::Pde(ref c)) if c.problem.domain.is_one_dimensional()
        ) {
        1
    } else {
        2
    };

    println!("case={} rbf={family} Q={}", args.case, args.quad);
    println!(
        "{:>6} {:>6} {:>12} {:>13} {:>13} {:>9} {:>9}",
        "M", "N", "eps", "e2", "einf", "rate2", "rate_inf"
    );
    let mut rows = Vec::new();
    for (i, r) in runs.iter().enumerate() {
        let (rate2, rate_inf) = if i == 0 {
            (None, None)
        } else {
            let prev = &runs[i - 1];
            (
                conv_rate(prev.e2, r.e2, prev.m, r.m, dim).ok(),
                conv_rate(prev.einf, r.einf, prev.m, r.m, dim).ok(),
            )
        };
        let fmt_rate = |r: Option<f64>| r.map(|v| format!("{v:9.4}")).unwrap_or_else(|| "        -".to_string());
        println!(
            "{:>6} {:>6} {:>12.6} {:>13.4e} {:>13.4e} {} {}",
            r.m,
            r.n,
            r.epsilon,
            r.e2,
            r.einf,
            fmt_rate(rate2),
            fmt_rate(rate_inf)
        );
        rows.push(ResultRow {
            case: args.case.clone(),
            rbf: family,
            m: r.m,
            n: r.n,
            q: args.quad,
            epsilon: r.epsilon,
            e2: r.e2,
            einf: r.einf,
            rate: rate2,
            wall_ms: r.wall_ms,
            cond: r.cond,
        });
    }
    if let Some(out) = &args.out {
        write_results_csv(out, &rows)?;
    }
    Ok(())
}

fn cmd_weights(args: &WeightsArgs) -> Result<(), CliError> {
    let family = parse_family(&args.rbf)?;
    let domain = config::parse_domain_spec(&args.domain)?;
    let nodes = config::resolve_nodes(&args.nodes, &domain)?;
    let eps = resolve_eps(args.eps, args.cstar, nodes.m())
        .expect("clap group guarantees one of eps/cstar");
    let theta = expr::parse(&args.theta)
        .map_err(|e| CliError::Config(format!("--theta: {e}")))?
        .eval(0.0, 0.0, 0.0);
    let rbf = Rbf::new(family, eps)?;
    let rule = gauss_jacobi_cached(args.alpha, args.quad)?;
    let (w, report) = compute_weights(
        &rbf,
        &nodes,
        &Direction::new(theta),
        args.alpha,
        &domain,
        &rule,
    )?;
    w.write_csv(&args.out)?;
    println!(
        "weights: {}x{} (alpha={}, theta={theta}), eps={eps:.6}",
        w.order(),
        w.order(),
        args.alpha
    );
    println!(
        "condition estimate = {:.3e}, max reconstruction residual = {:.3e}",
        report.condition_estimate, report.max_residual
    );
    if report.is_ill_conditioned() {
        eprintln!(
            "warning: condition estimate {:.3e} exceeds {CONDITION_WARN_THRESHOLD:.0e}",
            report.condition_estimate
        );
    }
    println!("wrote {}", args.out.display());
    Ok(())
}

fn configure_threads() {
    if let Ok(v) = std::env::var("FRACDQ_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n > 0 {
                // Ignore failure when a pool already exists (e.g. in tests).
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Convergence(args) => cmd_convergence(args),
        Command::Weights(args) => cmd_weights(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(2)
        }
    }
}
