//! The `gbe` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 domain or singularity error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::ansatz::{build_solution, rational_solution, xi_solution, AnsatzError, RiccatiBranch, SolutionField};
use crate::catalog::{all_cases, get_case, CatalogEntry, CatalogError};
use crate::equivalence::EquivalenceElement;
use crate::jets::{EvalError, Point};
use crate::numsolve::{compare, convergence_study, solve_ibvp, IbvpSpec, NumsolveError};
use crate::region::Region;
use crate::verify::{case_residual, gbe_residual, sweep, Check, VerifyError};

#[derive(Debug, Parser)]
#[command(name = "gbe", version, about = "Exact solutions of u_t + u u_x + f(t,x) u_xx = 0")]
pub struct Cli {
    /// Output file (default: standard output).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for sweeps and convergence studies.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the catalog of arbitrary elements f with their ξ and θ.
    List {
        #[arg(long)]
        case: Option<i64>,
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Evaluate a solution on a grid.
    Eval(EvalArgs),
    /// Sweep residuals of catalog rows over a grid.
    Verify(VerifyArgs),
    /// Push a solution through an equivalence transformation.
    Transform(TransformArgs),
    /// Integrate the manufactured boundary value problem of a solution.
    Solve(SolveArgs),
    /// Convergence study of the numerical solver against a solution.
    Convergence(ConvergenceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// u = φ(θ) with φ from the Riccati branch given by --nu, --c1, --c2.
    Phi,
    /// u = ξ.
    Xi,
    /// u = (x + c1)/(t + c2).
    Rational,
}

#[derive(Debug, Clone, Args)]
pub struct SolutionArgs {
    #[arg(long)]
    pub case: i64,
    #[arg(long, value_enum, default_value = "phi")]
    pub kind: Kind,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c2: Option<f64>,
    /// Parameter of case 5.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub solution: SolutionArgs,
    /// t0,t1,x0,x1 (default: the case's reference region).
    #[arg(long, allow_hyphen_values = true)]
    pub region: Option<Region>,
    /// Grid size NTxNX.
    #[arg(long, default_value = "11x11", value_parser = parse_res)]
    pub res: (usize, usize),
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, conflicts_with = "all", required_unless_present = "all")]
    pub case: Option<i64>,
    #[arg(long)]
    pub all: bool,
    #[arg(long, value_enum)]
    pub which: Check,
    /// Riccati branch for --which gbe (default: u = ξ).
    #[arg(long, allow_hyphen_values = true, requires_all = ["c1", "c2"])]
    pub nu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub region: Option<Region>,
    #[arg(long, default_value = "50x50", value_parser = parse_res)]
    pub res: (usize, usize),
    /// Pass threshold on the scaled residual.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct TransformArgs {
    /// Group element as JSON {"alpha":..,"beta":..,"gamma":..,"delta":..,
    /// "mu0":..,"mu1":..,"kappa":..}, or @path to a file holding it.
    #[arg(long)]
    pub element: String,
    #[command(flatten)]
    pub solution: SolutionArgs,
    /// Region in the transformed variables (default: image of the case's
    /// reference region's corners).
    #[arg(long, allow_hyphen_values = true)]
    pub region: Option<Region>,
    #[arg(long, default_value = "11x11", value_parser = parse_res)]
    pub res: (usize, usize),
    /// Sweep the residual of the transformed solution over the region.
    #[arg(long)]
    pub recheck: bool,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub solution: SolutionArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub region: Option<Region>,
    /// NTxNX: output time levels and spatial cells.
    #[arg(long, default_value = "11x64", value_parser = parse_res)]
    pub res: (usize, usize),
    #[arg(long, default_value_t = 0.9)]
    pub dt_safety: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub solution: SolutionArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub region: Option<Region>,
    /// Comma-separated spatial cell counts.
    #[arg(long, default_value = "32,64,128", value_delimiter = ',')]
    pub resolutions: Vec<usize>,
    #[arg(long, default_value_t = 0.9)]
    pub dt_safety: f64,
}

fn parse_res(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NTxNX, got '{s}'"))?;
    let p = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("'{s}': {e}"));
    Ok((p(a)?, p(b)?))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error("verification failed: {0}")]
    Failed(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Domain(_) | CliError::Io(_) => 3,
        }
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::UnknownCase(_) | CatalogError::UnexpectedLambda(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<AnsatzError> for CliError {
    fn from(e: AnsatzError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::GridTooSmall(..) | VerifyError::DegenerateOperator => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<NumsolveError> for CliError {
    fn from(e: NumsolveError) -> Self {
        match e {
            NumsolveError::InvalidSpec(_) | NumsolveError::BadResolutions(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Domain(e.to_string()),
        }
    }
}

fn need(v: Option<f64>, name: &str, kind: &str) -> Result<f64, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{name} is required for --kind {kind}")))
}

impl SolutionArgs {
    fn entry(&self) -> Result<CatalogEntry, CliError> {
        Ok(get_case(self.case, self.lambda)?)
    }

    fn build(&self, entry: &CatalogEntry) -> Result<SolutionField, CliError> {
        Ok(match self.kind {
            Kind::Phi => build_solution(
                entry,
                RiccatiBranch::new(
                    need(self.nu, "nu", "phi")?,
                    need(self.c1, "c1", "phi")?,
                    need(self.c2, "c2", "phi")?,
                )?,
            ),
            Kind::Xi => xi_solution(entry),
            Kind::Rational => rational_solution(
                need(self.c1, "c1", "rational")?,
                need(self.c2, "c2", "rational")?,
                &entry.f,
            ),
        })
    }
}

fn check_grid(res: (usize, usize)) -> Result<(), CliError> {
    if res.0 < 2 || res.1 < 2 {
        return Err(CliError::Usage(format!("--res needs at least 2x2, got {}x{}", res.0, res.1)));
    }
    Ok(())
}

fn num(v: f64) -> String {
    // adding 0.0 turns -0 into +0
    format!("{:.16e}", v + 0.0)
}

fn write_grid_csv(w: &mut dyn Write, rows: &[(Point, f64)]) -> io::Result<()> {
    writeln!(w, "t,x,u")?;
    for (p, u) in rows {
        writeln!(w, "{},{},{}", num(p.t), num(p.x), num(*u))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct GridRow {
    t: f64,
    x: f64,
    u: f64,
}

fn grid_json(rows: &[(Point, f64)]) -> Vec<GridRow> {
    rows.iter().map(|(p, u)| GridRow { t: p.t, x: p.x, u: *u }).collect()
}

fn write_json(w: &mut dyn Write, v: &impl Serialize) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *w, v).map_err(io::Error::from)?;
    writeln!(w)?;
    Ok(())
}

fn cmd_list(
    case: Option<i64>,
    lambda: Option<f64>,
    format: Format,
    w: &mut dyn Write,
) -> Result<(), CliError> {
    let entries = match case {
        Some(id) => vec![get_case(id, lambda)?],
        None => all_cases(lambda)?,
    };
    let rows: Vec<_> = entries.iter().map(CatalogEntry::summary).collect();
    match format {
        Format::Json => write_json(w, &rows)?,
        Format::Csv => {
            writeln!(w, "case,f,xi,theta,singular")?;
            for r in &rows {
                let q = |s: &str| format!("\"{}\"", s.replace('"', "\"\""));
                writeln!(
                    w,
                    "{},{},{},{},{}",
                    r.id,
                    q(&r.f_expr),
                    q(&r.xi_expr),
                    q(&r.theta_expr),
                    q(&r.singular_description)
                )?;
            }
        }
        Format::Text => {
            let width = |get: fn(&crate::catalog::CaseSummary) -> &str, head: &str| {
                rows.iter().map(|r| get(r).len()).max().unwrap_or(0).max(head.len())
            };
            let wf = width(|r| &r.f_expr, "f");
            let wx = width(|r| &r.xi_expr, "xi");
            let wt = width(|r| &r.theta_expr, "theta");
            writeln!(w, "{:>4}  {:wf$}  {:wx$}  {:wt$}  singular set", "case", "f", "xi", "theta")?;
            for r in &rows {
                writeln!(
                    w,
                    "{:>4}  {:wf$}  {:wx$}  {:wt$}  {}",
                    r.id, r.f_expr, r.xi_expr, r.theta_expr, r.singular_description
                )?;
            }
        }
    }
    Ok(())
}

fn eval_grid(
    sol: &SolutionField,
    region: Region,
    res: (usize, usize),
) -> Result<Vec<(Point, f64)>, CliError> {
    check_grid(res)?;
    region
        .grid(res.0, res.1)
        .into_iter()
        .map(|p| Ok((p, sol.u.value(p)?)))
        .collect()
}

fn cmd_eval(a: &EvalArgs, format: Format, w: &mut dyn Write) -> Result<(), CliError> {
    let entry = a.solution.entry()?;
    let sol = a.solution.build(&entry)?;
    let region = a.region.unwrap_or(entry.region);
    entry
        .check_region(region, (4 * a.res.0.max(a.res.1)).max(101))
        .map_err(|e| CliError::Domain(format!("region {region} is not inside the domain of case {}: {e}", entry.id)))?;
    let rows = eval_grid(&sol, region, a.res)?;
    match format {
        Format::Json => write_json(
            w,
            &json!({ "provenance": sol.provenance, "region": region, "grid": grid_json(&rows) }),
        ),
        _ => Ok(write_grid_csv(w, &rows)?),
    }
}

#[derive(Serialize)]
struct VerifyRecord {
    case: u8,
    which: Check,
    tol: f64,
    pass: bool,
    report: crate::verify::SweepReport,
}

fn cmd_verify(a: &VerifyArgs, w: &mut dyn Write) -> Result<(), CliError> {
    check_grid(a.res)?;
    let entries = match a.case {
        Some(id) => vec![get_case(id, a.lambda)?],
        None => all_cases(a.lambda)?,
    };
    let mut records = Vec::new();
    for e in &entries {
        let solution = match a.nu {
            Some(nu) => Some(build_solution(
                e,
                RiccatiBranch::new(nu, need(a.c1, "c1", "phi")?, need(a.c2, "c2", "phi")?)?,
            )),
            None => None,
        };
        let region = a.region.unwrap_or(e.region);
        let report = sweep(case_residual(e, a.which, solution.as_ref()), region, a.res.0, a.res.1)
            .map_err(|err| CliError::Domain(format!("case {}: {err}", e.id)))?;
        records.push(VerifyRecord {
            case: e.id,
            which: a.which,
            tol: a.tol,
            pass: report.passes(a.tol),
            report,
        });
    }
    write_json(w, &records)?;
    let failed: Vec<String> = records.iter().filter(|r| !r.pass).map(|r| r.case.to_string()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("case(s) {} above tolerance {}", failed.join(", "), a.tol)))
    }
}

fn parse_element(s: &str) -> Result<EquivalenceElement, CliError> {
    let text = match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)?,
        None => s.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid --element: {e}")))
}

fn image_region(g: &EquivalenceElement, r: Region) -> Result<Region, CliError> {
    let corners = [(r.t0, r.x0), (r.t0, r.x1), (r.t1, r.x0), (r.t1, r.x1)];
    let mut out = Region::new(f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (t, x) in corners {
        let p = g
            .apply_point(Point::new(t, x))
            .map_err(|e| CliError::Domain(format!("cannot map default region: {e}")))?;
        out.t0 = out.t0.min(p.t);
        out.t1 = out.t1.max(p.t);
        out.x0 = out.x0.min(p.x);
        out.x1 = out.x1.max(p.x);
    }
    if out.is_valid() {
        Ok(out)
    } else {
        Err(CliError::Usage("image of the default region is degenerate; pass --region".into()))
    }
}

fn cmd_transform(a: &TransformArgs, format: Format, w: &mut dyn Write, log: &mut dyn Write) -> Result<(), CliError> {
    let g = parse_element(&a.element)?;
    let entry = a.solution.entry()?;
    let sol = a.solution.build(&entry)?;
    let region = match a.region {
        Some(r) => r,
        None => image_region(&g, entry.region)?,
    };
    check_grid(a.res)?;
    let moved = g.transform_solution(&sol);
    let mut rows = Vec::new();
    let mut skipped = 0usize;
    for p in region.grid(a.res.0, a.res.1) {
        match moved.u.value(p) {
            Ok(u) => rows.push((p, u)),
            Err(_) => skipped += 1,
        }
    }
    let f_description = format!(
        "f~(t~, x~) = {} * f(t, x), (t, x) the preimage of (t~, x~), f = {}",
        num(g.f_factor()),
        entry.f_expr
    );
    let recheck = if a.recheck {
        let (u, f) = (moved.u.clone(), moved.f.clone());
        Some(sweep(
            move |p| Ok(gbe_residual(&u, &f, p)?.scaled()),
            region,
            a.res.0,
            a.res.1,
        )?)
    } else {
        None
    };
    match format {
        Format::Json => write_json(
            w,
            &json!({
                "element": g,
                "region": region,
                "f_description": f_description,
                "provenance": moved.provenance,
                "points_skipped": skipped,
                "recheck": recheck,
                "grid": grid_json(&rows),
            }),
        )?,
        _ => {
            write_grid_csv(w, &rows)?;
            writeln!(log, "{f_description}")?;
            writeln!(log, "points skipped: {skipped}")?;
            if let Some(r) = &recheck {
                writeln!(log, "recheck: {}", serde_json::to_string(r).map_err(io::Error::from)?)?;
            }
        }
    }
    match recheck {
        Some(r) if !r.passes(a.tol) => Err(CliError::Failed(format!(
            "transformed residual {} exceeds {}",
            r.max_abs_residual, a.tol
        ))),
        _ => Ok(()),
    }
}

fn cmd_solve(a: &SolveArgs, format: Format, w: &mut dyn Write, log: &mut dyn Write) -> Result<(), CliError> {
    let entry = a.solution.entry()?;
    let sol = a.solution.build(&entry)?;
    let region = a.region.unwrap_or(entry.region);
    let mut spec = IbvpSpec::manufactured(&sol, region, a.res.1);
    spec.n_out = a.res.0;
    spec.dt_safety = a.dt_safety;
    let numeric = solve_ibvp(&spec)?;
    let errors = compare(&numeric, &sol)?;
    match format {
        Format::Json => write_json(
            w,
            &json!({
                "provenance": sol.provenance,
                "region": region,
                "errors": errors,
                "solution": numeric,
            }),
        )?,
        _ => {
            numeric.write_csv(&mut *w)?;
            writeln!(log, "{}", numeric.scheme)?;
            writeln!(log, "final time errors: max {} rms {}", num(errors.max_err), num(errors.l2_err))?;
        }
    }
    Ok(())
}

fn cmd_convergence(a: &ConvergenceArgs, format: Format, w: &mut dyn Write, log: &mut dyn Write) -> Result<(), CliError> {
    let entry = a.solution.entry()?;
    let sol = a.solution.build(&entry)?;
    let region = a.region.unwrap_or(entry.region);
    let report = convergence_study(&sol, region, a.dt_safety, &a.resolutions)?;
    match format {
        Format::Json => write_json(
            w,
            &json!({ "provenance": sol.provenance, "region": region, "study": report }),
        )?,
        _ => {
            writeln!(w, "n_x,dx,max_err,l2_err,steps")?;
            for r in &report.rows {
                writeln!(w, "{},{},{},{},{}", r.n_x, num(r.dx), num(r.max_err), num(r.l2_err), r.steps)?;
            }
            match report.observed_order {
                Some(p) => writeln!(log, "observed order: {}", num(p))?,
                None => writeln!(log, "observed order: none (errors at roundoff)")?,
            }
        }
    }
    if report.degenerate {
        writeln!(log, "warning: errors at roundoff level; study is degenerate")?;
    }
    if report.non_monotone {
        writeln!(log, "warning: errors do not decrease monotonically")?;
    }
    Ok(())
}

/// Runs a parsed command line, writing results to `w` and diagnostics to
/// `log`.
pub fn run(cli: &Cli, w: &mut dyn Write, log: &mut dyn Write) -> Result<(), CliError> {
    let fmt = |default: Format| cli.format.unwrap_or(default);
    let go = |w: &mut dyn Write, log: &mut dyn Write| match &cli.command {
        Command::List { case, lambda } => cmd_list(*case, *lambda, fmt(Format::Text), w),
        Command::Eval(a) => cmd_eval(a, fmt(Format::Csv), w),
        Command::Verify(a) => cmd_verify(a, w),
        Command::Transform(a) => cmd_transform(a, fmt(Format::Csv), w, log),
        Command::Solve(a) => cmd_solve(a, fmt(Format::Csv), w, log),
        Command::Convergence(a) => cmd_convergence(a, fmt(Format::Csv), w, log),
    };
    match cli.jobs {
        Some(0) => Err(CliError::Usage("--jobs must be at least 1".into())),
        Some(n) => {
            let (out, err, r) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?
            .install(|| {
                // buffered so the sinks need not be Send
                let (mut out, mut err) = (Vec::new(), Vec::new());
                let r = go(&mut out, &mut err);
                (out, err, r)
            });
            w.write_all(&out)?;
            log.write_all(&err)?;
            r
        }
        None => go(w, log),
    }
}

/// Entry point of the `gbe` binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let stderr = io::stderr();
    let mut log = stderr.lock();
    let result = (|| -> Result<(), CliError> {
        match &cli.out {
            Some(path) => {
                let mut w = BufWriter::new(File::create(path)?);
                let r = run(&cli, &mut w, &mut log);
                w.flush()?;
                r
            }
            None => {
                let stdout = io::stdout();
                let mut w = BufWriter::new(stdout.lock());
                let r = run(&cli, &mut w, &mut log);
                w.flush()?;
                r
            }
        }
    })();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = writeln!(log, "error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
