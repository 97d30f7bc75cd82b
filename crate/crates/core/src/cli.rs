//! Command-line surface of the `skl` binary.
//!
//! Options can also come from a flat `key=value` file passed with
//! `--config`; keys are the long flag names and flags given on the command
//! line take precedence. A `subcommand=` key selects the subcommand when none
//! is given on the command line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::kernels::{
    classical_heat_kernel, classical_wave_kernel, distance, wave_kernel, HeatKernel, KernelQuery,
    NormalizationTable,
};
use crate::quadrature::{QuadratureSpec, Scheme};
use crate::solvers::{solve, GridDatum, InitialDatum, Problem, SolveRequest};
use crate::verify::{limit_ladder, run_suite, LimitTarget, Probes, Suite, Thresholds};
use crate::{Error, Result};

pub const CSV_HEADER: &str = "n,k,t,r,value,branch,est_error";

const SUBCOMMANDS: [&str; 5] = ["eval", "solve", "verify", "limits", "table"];

#[derive(Debug, Parser)]
#[command(name = "skl", version, about = "Singular heat and wave kernels, solvers and checks")]
pub struct Cli {
    /// Flat key=value file with default option values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print kernel values as CSV rows.
    Eval(EvalArgs),
    /// Solve a Cauchy problem at one point.
    Solve(SolveArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
    /// Run a limit ladder.
    Limits(LimitsArgs),
    /// Sweep a (t, r) grid of kernel values to CSV.
    Table(TableArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelKind {
    Heat,
    ScaledHeat,
    ClassicalHeat,
    Wave,
    ClassicalWave,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProblemKind {
    Heat,
    Wave,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DatumKind {
    Gaussian,
    Bump,
    Poly,
    Constant,
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeKind {
    Adaptive,
    GaussLegendre,
    GaussLaguerre,
}

#[derive(Debug, Clone, Args)]
#[command(args_override_self = true)]
pub struct EvalArgs {
    #[arg(long, value_enum)]
    pub kernel: KernelKind,
    /// Dimension, list or range (`2..5`).
    #[arg(long)]
    pub n: String,
    /// Singular parameter; list or `a:b:step`.
    #[arg(long)]
    pub k: String,
    #[arg(long)]
    pub t: String,
    /// Radial distance; list or `a:b:step`. Alternative to `--x`/`--y`.
    #[arg(long, required_unless_present = "x")]
    pub r: Option<String>,
    /// Evaluation point, comma separated.
    #[arg(long, requires = "y", conflicts_with = "r")]
    pub x: Option<String>,
    /// Source point, comma separated.
    #[arg(long, requires = "x")]
    pub y: Option<String>,
}

#[derive(Debug, Clone, Args)]
#[command(args_override_self = true)]
pub struct TableArgs {
    #[arg(long, value_enum)]
    pub kernel: KernelKind,
    #[arg(long)]
    pub n: String,
    #[arg(long)]
    pub k: String,
    #[arg(long)]
    pub t: String,
    #[arg(long)]
    pub r: String,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DatumArgs {
    #[arg(long, value_enum, default_value = "gaussian")]
    pub datum: DatumKind,
    /// Center of the datum, comma separated; the origin when absent.
    #[arg(long)]
    pub center: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    pub width: f64,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 1.0)]
    pub amplitude: f64,
    /// Coefficients of `Σ c_j |Y − center|^{2j}`.
    #[arg(long)]
    pub coefficients: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    pub value: f64,
    /// CSV grid with header `x1,...,xn,value`.
    #[arg(long)]
    pub grid: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub grid_order: u8,
}

#[derive(Debug, Clone, Args)]
pub struct QuadArgs {
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeKind>,
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub max_subdivisions: Option<usize>,
}

#[derive(Debug, Clone, Args)]
#[command(args_override_self = true)]
pub struct SolveArgs {
    #[arg(long, value_enum)]
    pub problem: ProblemKind,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: f64,
    #[arg(long)]
    pub t: f64,
    /// Evaluation point, comma separated; the origin when absent.
    #[arg(long)]
    pub x: Option<String>,
    #[command(flatten)]
    pub datum: DatumArgs,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Debug, Clone, Args)]
#[command(args_override_self = true)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value = "2..8")]
    pub n: String,
    #[arg(long, default_value = "0.25,0.5,0.75")]
    pub k: String,
    /// Summary CSV (`check,status,detail`).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
#[command(args_override_self = true)]
pub struct LimitsArgs {
    /// heat_k0, wave_k0, heat_ic, wave_ic0 or wave_ic1.
    #[arg(long)]
    pub target: String,
    #[arg(long)]
    pub n: usize,
    /// Fixed `k` for the initial-condition targets.
    #[arg(long, default_value_t = 0.5)]
    pub k: f64,
    /// Exponents `j` of the ladder parameter `base^{-j}`.
    #[arg(long, default_value = "6..12")]
    pub j: String,
    /// Ladder base; 2 for the k targets and 4 for the t targets when absent.
    #[arg(long)]
    pub base: Option<f64>,
    /// Probe times for the kernel targets.
    #[arg(long, default_value = "0.5,1")]
    pub t: String,
    /// Probe radii for the kernel targets, paired with `--t`.
    #[arg(long, default_value = "0.3,0.6")]
    pub r: String,
    /// Probe point for the solution targets.
    #[arg(long)]
    pub x: Option<String>,
    #[command(flatten)]
    pub datum: DatumArgs,
}

/// Reads a flat `key=value` file. Blank lines and `#` comments are skipped.
pub fn read_config(path: &Path) -> Result<Vec<(String, String)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key=value", i + 1)))?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() {
            return Err(Error::Config(format!("line {}: empty key", i + 1)));
        }
        out.push((key, value.trim().to_string()));
    }
    Ok(out)
}

/// Splices the config file named by `--config` into `argv` ahead of the
/// command-line flags.
pub fn expand_args(argv: Vec<String>) -> Result<Vec<String>> {
    let mut config = None;
    let mut rest = Vec::with_capacity(argv.len());
    let mut it = argv.into_iter();
    let program = it.next().unwrap_or_else(|| "skl".into());
    while let Some(a) = it.next() {
        if a == "--config" {
            config = Some(it.next().ok_or_else(|| Error::Config("--config needs a path".into()))?);
        } else if let Some(p) = a.strip_prefix("--config=") {
            config = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = config else {
        let mut out = vec![program];
        out.extend(rest);
        return Ok(out);
    };
    let entries = read_config(Path::new(&path))?;
    let pos = rest.iter().position(|a| SUBCOMMANDS.contains(&a.as_str()));
    let sub = match pos {
        Some(i) => rest.remove(i),
        None => entries
            .iter()
            .find(|(k, _)| k == "subcommand")
            .map(|(_, v)| v.clone())
            .ok_or_else(|| Error::Config("no subcommand on the command line or in the config file".into()))?,
    };
    let mut out = vec![program, sub];
    for (key, value) in entries.into_iter().filter(|(k, _)| k != "subcommand") {
        out.push(format!("--{key}={value}"));
    }
    out.extend(rest);
    Ok(out)
}

fn parse_real(s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::Config(format!("not a number: `{s}`")))
}

/// Comma-separated reals; an item `a:b:step` expands to `a, a+step, ..., b`.
pub fn parse_reals(s: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [v] => out.push(parse_real(v)?),
            [a, b, step] => {
                let (a, b, step) = (parse_real(a)?, parse_real(b)?, parse_real(step)?);
                if !(step > 0.0) || b < a {
                    return Err(Error::Config(format!("bad range `{item}`")));
                }
                let count = ((b - a) / step + 1e-9).floor() as usize;
                out.extend((0..=count).map(|i| a + i as f64 * step));
            }
            _ => return Err(Error::Config(format!("bad range `{item}`"))),
        }
    }
    if out.is_empty() {
        return Err(Error::Config("empty value list".into()));
    }
    Ok(out)
}

/// Comma-separated integers; an item `a..b` expands inclusively.
pub fn parse_dims(s: &str) -> Result<Vec<usize>> {
    let int = |v: &str| -> Result<usize> { v.trim().parse().map_err(|_| Error::Config(format!("not an integer: `{v}`"))) };
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        match item.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (int(a)?, int(b.trim_start_matches('='))?);
                if b < a {
                    return Err(Error::Config(format!("bad range `{item}`")));
                }
                out.extend(a..=b);
            }
            None => out.push(int(item)?),
        }
    }
    if out.is_empty() {
        return Err(Error::Config("empty dimension list".into()));
    }
    Ok(out)
}

fn parse_point(s: &str, n: usize) -> Result<Vec<f64>> {
    let v = s.split(',').map(parse_real).collect::<Result<Vec<f64>>>()?;
    if v.len() != n {
        return Err(Error::Config(format!("point `{s}` has {} coordinates, expected {n}", v.len())));
    }
    Ok(v)
}

/// One CSV row of kernel output.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub n: usize,
    pub k: f64,
    pub t: f64,
    pub r: f64,
    pub value: f64,
    pub branch: &'static str,
    pub est_error: f64,
}

impl Row {
    /// Floats in shortest round-trip form.
    pub fn to_csv(&self) -> String {
        format!(
            "{},{:?},{:?},{:?},{:?},{},{:?}",
            self.n, self.k, self.t, self.r, self.value, self.branch, self.est_error
        )
    }
}

struct KernelEval {
    kind: KernelKind,
    norms: NormalizationTable,
}

impl KernelEval {
    fn new(kind: KernelKind, ns: &[usize], ks: &[f64]) -> Result<Self> {
        let norms = if kind == KernelKind::Wave {
            NormalizationTable::build(ns, ks)?
        } else {
            NormalizationTable::default()
        };
        Ok(KernelEval { kind, norms })
    }

    fn row(&self, n: usize, k: f64, t: f64, r: f64) -> Result<Row> {
        let q = KernelQuery::new(n, k, t, r);
        let (value, branch, est_error) = match self.kind {
            KernelKind::Heat | KernelKind::ScaledHeat => {
                q.validate()?;
                let (v, d) = HeatKernel::new(n, k)?.eval_diag(t, r)?;
                let scale = if self.kind == KernelKind::ScaledHeat { t.powf(k) } else { 1.0 };
                (scale * v, d.branch.as_str(), scale * d.est_error)
            }
            KernelKind::ClassicalHeat => (classical_heat_kernel(q)?, "closed_form", 0.0),
            KernelKind::Wave => {
                let branch = match n {
                    2 => "wave_2d",
                    _ if n % 2 == 1 => "wave_odd",
                    _ => "wave_even",
                };
                (wave_kernel(q, &self.norms)?, branch, 0.0)
            }
            KernelKind::ClassicalWave => (classical_wave_kernel(q)?, "closed_form", 0.0),
        };
        Ok(Row { n, k, t, r, value, branch, est_error })
    }

    fn is_wave(&self) -> bool {
        matches!(self.kind, KernelKind::Wave | KernelKind::ClassicalWave)
    }
}

/// Kernel rows over the product `ns × ks × ts × rs` in that nesting order.
/// With `skip_outside_cone`, wave rows with `r ≥ t` are left out.
pub fn kernel_rows(
    kind: KernelKind,
    ns: &[usize],
    ks: &[f64],
    ts: &[f64],
    rs: &[f64],
    skip_outside_cone: bool,
) -> Result<Vec<Row>> {
    let ev = KernelEval::new(kind, ns, ks)?;
    let mut rows = Vec::new();
    for &n in ns {
        for &k in ks {
            for &t in ts {
                for &r in rs {
                    if skip_outside_cone && ev.is_wave() && r >= t {
                        continue;
                    }
                    rows.push(ev.row(n, k, t, r)?);
                }
            }
        }
    }
    Ok(rows)
}

fn write_rows(rows: &[Row], out: &mut dyn Write) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{}", r.to_csv())?;
    }
    Ok(())
}

fn build_datum(a: &DatumArgs, n: usize) -> Result<InitialDatum> {
    let center = match &a.center {
        Some(c) => parse_point(c, n)?,
        None => vec![0.0; n],
    };
    let d = match a.datum {
        DatumKind::Gaussian => InitialDatum::Gaussian { center, width: a.width, amplitude: a.amplitude },
        DatumKind::Bump => InitialDatum::Bump { center, radius: a.radius, amplitude: a.amplitude },
        DatumKind::Poly => {
            let coefficients = match &a.coefficients {
                Some(c) => c.split(',').map(parse_real).collect::<Result<Vec<f64>>>()?,
                None => return Err(Error::Config("--datum poly needs --coefficients".into())),
            };
            InitialDatum::RadialPoly { center, coefficients }
        }
        DatumKind::Constant => InitialDatum::constant(n, a.value),
        DatumKind::Grid => {
            let path = a.grid.as_ref().ok_or_else(|| Error::Config("--datum grid needs --grid".into()))?;
            InitialDatum::Grid(GridDatum::from_csv_path(path, n, a.grid_order)?)
        }
    };
    d.validate(n)?;
    Ok(d)
}

fn build_quad(q: &QuadArgs) -> QuadratureSpec {
    let mut spec = QuadratureSpec::default();
    if let Some(s) = q.scheme {
        spec.scheme = match s {
            SchemeKind::Adaptive => Scheme::AdaptiveSubdivision,
            SchemeKind::GaussLegendre => Scheme::GaussLegendre,
            SchemeKind::GaussLaguerre => Scheme::GaussLaguerre { alpha: 0.0 },
        };
        if s == SchemeKind::GaussLaguerre && q.nodes.is_none() {
            spec.nodes = 64;
        }
    }
    if let Some(n) = q.nodes {
        spec.nodes = n;
    }
    if let Some(t) = q.rel_tol {
        spec.rel_tol = t;
    }
    if let Some(m) = q.max_subdivisions {
        spec.max_subdivisions = m;
    }
    spec
}

fn run_eval(a: &EvalArgs, out: &mut dyn Write) -> Result<()> {
    let (ns, ks, ts) = (parse_dims(&a.n)?, parse_reals(&a.k)?, parse_reals(&a.t)?);
    let rs = match (&a.r, &a.x, &a.y) {
        (Some(r), _, _) => parse_reals(r)?,
        (None, Some(x), Some(y)) => {
            if ns.len() != 1 {
                return Err(Error::Config("--x/--y need a single --n".into()));
            }
            vec![distance(&parse_point(x, ns[0])?, &parse_point(y, ns[0])?)]
        }
        _ => return Err(Error::Config("give --r or both --x and --y".into())),
    };
    write_rows(&kernel_rows(a.kernel, &ns, &ks, &ts, &rs, false)?, out)
}

fn run_table(a: &TableArgs, out: &mut dyn Write) -> Result<()> {
    let rows = kernel_rows(
        a.kernel,
        &parse_dims(&a.n)?,
        &parse_reals(&a.k)?,
        &parse_reals(&a.t)?,
        &parse_reals(&a.r)?,
        true,
    )?;
    match &a.output {
        Some(path) => {
            let mut f = fs::File::create(path)?;
            write_rows(&rows, &mut f)
        }
        None => write_rows(&rows, out),
    }
}

fn run_solve(a: &SolveArgs, out: &mut dyn Write) -> Result<()> {
    let x = match &a.x {
        Some(x) => parse_point(x, a.n)?,
        None => vec![0.0; a.n],
    };
    let problem = match a.problem {
        ProblemKind::Heat => Problem::Heat,
        ProblemKind::Wave => Problem::Wave,
    };
    let mut req = SolveRequest::new(problem, a.n, a.k, a.t, x, build_datum(&a.datum, a.n)?);
    req.quad = build_quad(&a.quad);
    let res = solve(&req)?;
    writeln!(out, "value={:?}", res.value)?;
    writeln!(out, "est_error={:?}", res.est_error)?;
    writeln!(out, "branch={}", res.diagnostics.branch)?;
    writeln!(out, "nodes_used={}", res.diagnostics.nodes_used)?;
    writeln!(out, "certified={}", res.diagnostics.certified)?;
    Ok(())
}

/// Returns whether every check passed.
fn run_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<bool> {
    let suite: Suite = a.suite.parse()?;
    let summary = run_suite(suite, &parse_dims(&a.n)?, &parse_reals(&a.k)?, &Thresholds::default())?;
    out.write_all(summary.render().as_bytes())?;
    let passed = summary.all_passed();
    writeln!(out, "{}", if passed { "all checks passed" } else { "some checks failed" })?;
    if let Some(path) = &a.output {
        let mut w = csv::Writer::from_path(path).map_err(|e| Error::Io(e.to_string()))?;
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["check", "status", "detail"]).map_err(io)?;
        for l in &summary.lines {
            let status = match l.passed {
                Some(true) => "pass",
                Some(false) => "fail",
                None => "info",
            };
            w.write_record([l.name.as_str(), status, l.detail.as_str()]).map_err(io)?;
        }
        w.flush()?;
    }
    Ok(passed)
}

fn run_limits(a: &LimitsArgs, out: &mut dyn Write) -> Result<()> {
    let target: LimitTarget = a.target.parse()?;
    let kernel_target = matches!(target, LimitTarget::HeatK0 | LimitTarget::WaveK0);
    let base = a.base.unwrap_or(if kernel_target { 2.0 } else { 4.0 });
    if !(base > 1.0) {
        return Err(Error::Config(format!("ladder base {base} must exceed 1")));
    }
    let ladder: Vec<f64> = parse_dims(&a.j)?.into_iter().map(|j| base.powi(-(j as i32))).collect();
    let probes = if kernel_target {
        let (ts, rs) = (parse_reals(&a.t)?, parse_reals(&a.r)?);
        if ts.len() != rs.len() {
            return Err(Error::Config("--t and --r must have the same length".into()));
        }
        Probes::Kernel(ts.into_iter().zip(rs).collect())
    } else {
        let x = match &a.x {
            Some(x) => parse_point(x, a.n)?,
            None => vec![0.0; a.n],
        };
        Probes::Solution { points: vec![x], datum: build_datum(&a.datum, a.n)? }
    };
    let k = if kernel_target { 0.0 } else { a.k };
    let rep = limit_ladder(target, a.n, k, &ladder, &probes)?;
    writeln!(out, "parameter,distance,ratio")?;
    let mut prev: Option<f64> = None;
    for &(p, d) in &rep.ladder {
        let ratio = prev.map_or(String::new(), |q| format!("{:?}", d / q));
        writeln!(out, "{p:?},{d:?},{ratio}")?;
        prev = Some(d);
    }
    writeln!(out, "# target={} est_rate={:?} monotone={}", target.as_str(), rep.est_rate, rep.monotone())?;
    Ok(())
}

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

/// Runs a parsed command, writing its report to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Eval(a) => run_eval(a, out)?,
        Command::Table(a) => run_table(a, out)?,
        Command::Solve(a) => run_solve(a, out)?,
        Command::Limits(a) => run_limits(a, out)?,
        Command::Verify(a) => {
            return Ok(if run_verify(a, out)? { EXIT_OK } else { EXIT_CHECK_FAILED });
        }
    }
    Ok(EXIT_OK)
}

/// Entry point of the binary: parses `argv`, runs, and returns the exit code.
pub fn main_with_args(argv: Vec<String>) -> i32 {
    let argv = match expand_args(argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID;
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(&cli, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_lists() {
        assert_eq!(parse_dims("2..5").unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(parse_dims("2,4,7..8").unwrap(), vec![2, 4, 7, 8]);
        assert_eq!(parse_reals("0.5,1").unwrap(), vec![0.5, 1.0]);
        let r = parse_reals("0:0.99:0.01").unwrap();
        assert_eq!(r.len(), 100);
        assert_eq!(r[0], 0.0);
        assert!((r[99] - 0.99).abs() < 1e-12);
        assert!(parse_reals("1:0:0.1").is_err());
        assert!(parse_dims("5..2").is_err());
        assert!(parse_reals("").is_err());
    }

    #[test]
    fn config_lines() {
        let c = parse_config("# comment\nkernel = heat\n\nrel_tol=1e-9\n").unwrap();
        assert_eq!(c, vec![("kernel".into(), "heat".into()), ("rel-tol".into(), "1e-9".into())]);
        assert!(parse_config("novalue\n").is_err());
    }

    #[test]
    fn csv_floats_round_trip() {
        let row = Row { n: 3, k: 0.1, t: 1.0, r: 1e-7, value: 1.0 / 3.0, branch: "x", est_error: 0.0 };
        let line = row.to_csv();
        let v: f64 = line.split(',').nth(4).unwrap().parse().unwrap();
        assert_eq!(v.to_bits(), (1.0f64 / 3.0).to_bits());
        assert_eq!(line, "3,0.1,1.0,1e-7,0.3333333333333333,x,0.0");
    }

    #[test]
    fn flags_override_config() {
        let dir = std::env::temp_dir().join(format!("skl-cli-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("eval.conf");
        fs::write(&path, "subcommand=eval\nkernel=heat\nn=3\nk=0.5\nt=0.5\nr=0.7\n").unwrap();
        let argv = ["skl", "--config", path.to_str().unwrap(), "--t", "1"].map(String::from).to_vec();
        let cli = Cli::try_parse_from(expand_args(argv).unwrap()).unwrap();
        match cli.command {
            Command::Eval(a) => {
                assert_eq!(a.t, "1");
                assert_eq!(a.r.as_deref(), Some("0.7"));
            }
            other => panic!("{other:?}"),
        }
        fs::remove_dir_all(&dir).unwrap();
    }
}
